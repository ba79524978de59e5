"""Type A data: elementary symmetric polynomials, block subtori, restriction,
Coxeter eigenvectors and zero-sum partitions of their coordinates.

SU(n) has torus coordinates x1..xn with x1 + ... + xn = 0; its Weyl group
permutes them, and the cyclic shift x_i -> x_{i+1} is a Coxeter element with
Coxeter number n.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import CyclotomicElem, root_power
from .linalg import EXACT, matrix_rank
from .multipoly import (
    Polynomial,
    VariableSet,
    evaluate,
    linear_substitute,
)


def ambient_vars(n: int) -> VariableSet:
    return VariableSet.standard("x", n)


def elementary_symmetric(n: int, j: int, vars: VariableSet | None = None) -> Polynomial:
    """e_j in ``n`` unit-weight variables (x1..xn by default)."""
    if not 0 <= j <= n:
        raise ValueError(f"elementary symmetric index {j} outside [0, {n}]")
    vars = vars or ambient_vars(n)
    if len(vars) != n:
        raise ValueError("variable set size does not match n")
    terms = {}
    for idx in combinations(range(n), j):
        mono = [0] * n
        for i in idx:
            mono[i] = 1
        terms[tuple(mono)] = 1
    return Polynomial(vars, terms)


@dataclass(frozen=True)
class BlockDecomposition:
    n: int
    blocks: tuple

    def __init__(self, n: int, blocks: Sequence[int]):
        blocks = tuple(int(b) for b in blocks)
        if n < 1:
            raise ValueError("n must be positive")
        if not blocks or any(b < 1 for b in blocks):
            raise ValueError(f"block sizes must be positive, got {list(blocks)}")
        if sum(blocks) != n:
            raise ValueError(f"block sizes {list(blocks)} sum to {sum(blocks)}, not n = {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "blocks", blocks)

    @property
    def rank(self) -> int:
        return sum(q - 1 for q in self.blocks)

    def offsets(self) -> list:
        out, pos = [], 0
        for q in self.blocks:
            out.append(pos)
            pos += q
        return out

    def label(self) -> str:
        inner = "x".join(f"SU({q})" for q in self.blocks if q > 1) or "{1}"
        return f"SU({self.n})/{inner}"


@dataclass(frozen=True)
class TorusEmbedding:
    """Linear map from a subtorus (variables ``sub``) into x1..xn.

    ``images[i]`` is the linear form giving x_{i+1} on the subtorus.
    """

    n: int
    sub: VariableSet
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.n:
            raise ValueError(f"need {self.n} coordinate images, got {len(self.images)}")
        for f in self.images:
            if f.vars != self.sub:
                raise ValueError("coordinate images must live over the subtorus variables")
            if any(self.sub.degree(m) != 1 for m, _ in f.items()):
                raise ValueError(f"coordinate image {f} is not linear")
        total = sum(self.images, Polynomial.zero(self.sub))
        if not total.is_zero():
            raise ValueError(f"coordinate images do not sum to zero: {total}")
        if matrix_rank(self.matrix(), EXACT).rank != len(self.sub):
            raise ValueError("subtorus variables are not independent in the image")

    @property
    def rank(self) -> int:
        return len(self.sub)

    def matrix(self) -> list:
        """n x m coefficient matrix (Fractions)."""
        m = len(self.sub)
        rows = []
        for f in self.images:
            rows.append([Fraction(f.coefficient(self.sub.unit(j))) for j in range(m)])
        return rows

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence], names: Sequence[str] | None = None) -> "TorusEmbedding":
        n = len(matrix)
        m = len(matrix[0]) if n else 0
        if any(len(r) != m for r in matrix):
            raise ValueError("embedding matrix rows must have equal length")
        sub = VariableSet(names) if names else VariableSet.standard("s", m)
        images = tuple(
            Polynomial(sub, {sub.unit(j): Fraction(c) for j, c in enumerate(row)}) for row in matrix
        )
        return cls(n, sub, images)


def block_embedding(bd: BlockDecomposition) -> TorusEmbedding:
    """Standard maximal torus of S(U(q1) x ...) restricted to the SU blocks.

    In a block of size q >= 2 the first q-1 coordinates become fresh variables
    and the last one is minus their sum; size-1 blocks map to zero.
    """
    sub = VariableSet.standard("s", bd.rank)
    images = []
    v = 0
    for q in bd.blocks:
        if q == 1:
            images.append(Polynomial.zero(sub))
            continue
        block_vars = [Polynomial.variable(sub, v + i) for i in range(q - 1)]
        images.extend(block_vars)
        images.append(-sum(block_vars, Polynomial.zero(sub)))
        v += q - 1
    return TorusEmbedding(bd.n, sub, tuple(images))


def full_torus_embedding(n: int) -> TorusEmbedding:
    """The maximal torus of SU(n) itself, x_n = -(x_1 + ... + x_{n-1})."""
    return block_embedding(BlockDecomposition(n, [n]))


def restrict(emb: TorusEmbedding, j_range: Sequence[int] | None = None) -> list:
    """Restrictions p_j of P_j = e_j(x) to the subtorus, for j in ``j_range`` (default 2..n)."""
    n = emb.n
    js = list(j_range) if j_range is not None else list(range(2, n + 1))
    X = ambient_vars(n)
    return [linear_substitute(elementary_symmetric(n, j, X), emb.images, emb.sub) for j in js]


def block_letters(count: int) -> list:
    if count <= 26:
        return list(string.ascii_lowercase[:count])
    return [f"e{i}_" for i in range(1, count + 1)]


def block_invariant_ring(bd: BlockDecomposition) -> tuple:
    """Weighted ring of block invariants and the variable index per (block, degree)."""
    nontrivial = [q for q in bd.blocks if q > 1]
    letters = block_letters(len(nontrivial))
    names, weights, index = [], [], {}
    for b, (q, letter) in enumerate(zip(nontrivial, letters)):
        for a in range(2, q + 1):
            index[(b, a)] = len(names)
            names.append(f"{letter}{a}")
            weights.append(a)
    return VariableSet(names, weights), index


def block_invariant_polynomials(bd: BlockDecomposition) -> dict:
    """{j: p_j} for j = 2..n expressed in the block elementary symmetric generators.

    Coefficient of t^j in prod_i (1 + sum_{a>=2} e^(i)_a t^a); e^(i)_1 vanishes
    on the trace-zero block torus.
    """
    ring, index = block_invariant_ring(bd)
    n = bd.n
    one = Polynomial.constant(ring, 1)
    series = [one] + [Polynomial.zero(ring)] * n
    nontrivial = [q for q in bd.blocks if q > 1]
    for b, q in enumerate(nontrivial):
        factor = {0: one}
        for a in range(2, q + 1):
            factor[a] = Polynomial.variable(ring, index[(b, a)])
        new = [Polynomial.zero(ring)] * (n + 1)
        for i, s in enumerate(series):
            if s.is_zero():
                continue
            for a, f in factor.items():
                if i + a <= n:
                    new[i + a] = new[i + a] + s * f
        series = new
    return {j: series[j] for j in range(2, n + 1)}


@dataclass(frozen=True)
class CoxeterEigenvector:
    """Unnormalised eigenvector X_k of the cyclic Coxeter element of SU(n).

    coordinates = (zeta^(k(n-1)), zeta^(k(n-2)), ..., zeta^k, 1), zeta = zeta_n.
    """

    n: int
    k: int
    coordinates: tuple

    @property
    def eigenvalue(self) -> CyclotomicElem:
        return root_power(self.n, self.k)


def coxeter_eigenvector(n: int, k: int) -> CoxeterEigenvector:
    if not 1 <= k <= n - 1:
        raise ValueError(f"eigenvector index k={k} outside [1, {n - 1}]")
    coords = tuple(root_power(n, k * (n - 1 - i)) for i in range(n))
    return CoxeterEigenvector(n, k, coords)


def coxeter_shift(coords: Sequence) -> tuple:
    """Apply the Coxeter element x_i -> x_{i+1}: the value at slot i moves to slot i+1."""
    return (coords[-1],) + tuple(coords[:-1])


def eval_at_eigenvector(p: Polynomial, X: CoxeterEigenvector) -> CyclotomicElem:
    if len(p.vars) != X.n:
        raise ValueError(f"polynomial has {len(p.vars)} variables, eigenvector has {X.n} coordinates")
    if not p.is_homogeneous():
        raise ValueError("eigenvector evaluation needs a homogeneous polynomial")
    return evaluate(p, X.coordinates)


def _coord_sum(coords: Sequence, idx) -> CyclotomicElem:
    total = coords[idx[0]]
    for i in idx[1:]:
        total = total + coords[i]
    return total


def zero_sum_partition(X: CoxeterEigenvector | Sequence, block_sizes: Sequence[int]):
    """Split coordinate indices into blocks of the given sizes, each summing to zero.

    Depth-first over index subsets: blocks are filled smallest size first,
    indices in increasing order.  Returns the blocks as sorted index lists in
    the order of ``block_sizes``, or None when no such partition exists.
    """
    coords = X.coordinates if isinstance(X, CoxeterEigenvector) else tuple(X)
    n = len(coords)
    if sum(block_sizes) != n or any(s < 1 for s in block_sizes):
        raise ValueError(f"block sizes {list(block_sizes)} do not partition {n} coordinates")
    order = sorted(range(len(block_sizes)), key=lambda i: (block_sizes[i], i))
    sizes = [block_sizes[i] for i in order]
    zero = coords[0] * 0
    chosen: list = []

    def search(pos: int, remaining: tuple, prev_min: int):
        if pos == len(sizes):
            return True
        size = sizes[pos]
        if pos == len(sizes) - 1:
            if _coord_sum(coords, remaining) == zero:
                chosen.append(remaining)
                return True
            return False
        # equal consecutive sizes are interchangeable: force increasing minima
        same_as_prev = pos > 0 and sizes[pos - 1] == size
        for combo in combinations(remaining, size):
            if same_as_prev and combo[0] < prev_min:
                continue
            if _coord_sum(coords, combo) != zero:
                continue
            chosen.append(combo)
            rest = tuple(i for i in remaining if i not in combo)
            if search(pos + 1, rest, combo[0]):
                return True
            chosen.pop()
        return False

    if not search(0, tuple(range(n)), -1):
        return None
    result = [None] * len(block_sizes)
    for slot, combo in zip(order, chosen):
        result[slot] = list(combo)
    return result


def residue_partition(N: int, parts: int) -> list:
    """Indices 0..N-1 grouped by residue mod ``parts``."""
    return [list(range(t, N, parts)) for t in range(parts)]


def partition_sums_vanish(coords: Sequence, partition: Sequence[Sequence[int]]) -> bool:
    zero = coords[0] * 0
    return all(_coord_sum(coords, list(block)) == zero for block in partition)


def relocate(coords: Sequence, partition: Sequence[Sequence[int]]) -> tuple:
    """Weyl group image of ``coords``: block i of the partition fills block slot i.

    The permutation w is implicit in the partition.
    """
    return tuple(coords[i] for block in partition for i in block)


def in_block_torus(coords: Sequence, bd: BlockDecomposition) -> bool:
    """Whether a point of t(C) lies in the block subtorus s(C)."""
    zero = coords[0] * 0
    for off, q in zip(bd.offsets(), bd.blocks):
        block = coords[off : off + q]
        if q == 1:
            if block[0] != zero:
                return False
        elif _coord_sum(block, list(range(q))) != zero:
            return False
    return True


def field_rank(vectors: Sequence[Sequence]) -> int:
    """Rank of vectors with entries in an exact field (e.g. Q(zeta_N)), by Gaussian elimination."""
    rows = [list(v) for v in vectors]
    if not rows:
        return 0
    zero = rows[0][0] * 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != zero), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][col].inverse()
        pivot_row = [x * inv for x in rows[rank]]
        rows[rank] = pivot_row
        for r in range(len(rows)):
            if r != rank and rows[r][col] != zero:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], pivot_row)]
        rank += 1
    return rank

