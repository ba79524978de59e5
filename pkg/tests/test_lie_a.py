import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from formality.exact import root_power
from formality.lie_a import (
    BlockDecomposition,
    TorusEmbedding,
    block_embedding,
    block_invariant_polynomials,
    block_invariant_ring,
    coxeter_eigenvector,
    coxeter_shift,
    elementary_symmetric,
    eval_at_eigenvector,
    full_torus_embedding,
    in_block_torus,
    partition_sums_vanish,
    relocate,
    residue_partition,
    restrict,
    zero_sum_partition,
)
from formality.linalg import matrix_rank
from formality.multipoly import Polynomial, VariableSet, evaluate, format_poly, parse_poly


def partitions(n, largest=None):
    largest = largest or n
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def decompositions(n_max):
    for n in range(2, n_max + 1):
        for p in partitions(n):
            if p[0] >= 2:
                yield BlockDecomposition(n, p)


def texts(polys):
    return [format_poly(p) for p in polys]


def test_elementary_symmetric_examples():
    assert format_poly(elementary_symmetric(3, 2)) == "x1*x2 + x1*x3 + x2*x3"
    assert elementary_symmetric(5, 0) == 1
    assert format_poly(elementary_symmetric(4, 4)) == "x1*x2*x3*x4"
    with pytest.raises(ValueError):
        elementary_symmetric(3, 4)


def test_block_embedding_examples():
    assert texts(block_embedding(BlockDecomposition(4, [2, 2])).images) == ["s1", "-s1", "s2", "-s2"]
    assert texts(block_embedding(BlockDecomposition(6, [3, 3])).images) == [
        "s1", "s2", "-s1 - s2", "s3", "s4", "-s3 - s4",
    ]
    emb = block_embedding(BlockDecomposition(3, [2, 1]))
    assert texts(emb.images) == ["s1", "-s1", "0"] and emb.rank == 1


def test_block_decomposition_validation():
    with pytest.raises(ValueError):
        BlockDecomposition(6, [3, 2])
    assert BlockDecomposition(7, [3, 3, 1]).rank == 4


@pytest.mark.parametrize("bd", list(decompositions(10)), ids=str)
def test_block_embedding_invariants(bd):
    emb = block_embedding(bd)
    total = sum(emb.images, Polynomial.zero(emb.sub))
    assert total.is_zero()
    assert matrix_rank(emb.matrix()).rank == bd.rank


def test_torus_embedding_rejects_bad_input():
    with pytest.raises(ValueError):
        TorusEmbedding.from_matrix([[1], [1]])  # trace not zero
    with pytest.raises(ValueError):
        TorusEmbedding.from_matrix([[1, 2], [-1, -2]])  # rank 1 < 2


def test_restrict_examples():
    S = VariableSet.standard("s", 2)
    ps = restrict(block_embedding(BlockDecomposition(4, [2, 2])))
    assert ps == [parse_poly("-s1^2 - s2^2", S), Polynomial.zero(S), parse_poly("s1^2*s2^2", S)]

    for n in range(2, 7):
        emb = full_torus_embedding(n)
        assert all(not p.is_zero() for p in restrict(emb))

    S4 = VariableSet.standard("s", 4)
    p4 = restrict(block_embedding(BlockDecomposition(6, [3, 3])), [4])[0]
    e2a = parse_poly("s1*s2 + s1*(-s1 - s2) + s2*(-s1 - s2)", S4)
    e2b = parse_poly("s3*s4 + s3*(-s3 - s4) + s4*(-s3 - s4)", S4)
    assert p4 == e2a * e2b


def test_full_torus_restriction_is_coordinate_change():
    n = 4
    emb = full_torus_embedding(n)
    X = VariableSet.standard("x", n)
    S = emb.sub
    for j, p in zip(range(2, n + 1), restrict(emb)):
        direct = parse_poly(
            format_poly(elementary_symmetric(n, j)).replace("x4", "(-s1 - s2 - s3)").replace("x", "s"), S
        )
        assert p == direct


def test_block_invariant_examples():
    def named(blocks):
        bd = BlockDecomposition(sum(blocks), blocks)
        return {j: format_poly(p) for j, p in block_invariant_polynomials(bd).items()}

    assert named([2, 2]) == {2: "a2 + b2", 3: "0", 4: "a2*b2"}
    assert named([3, 3]) == {
        2: "a2 + b2", 3: "a3 + b3", 4: "a2*b2", 5: "a2*b3 + a3*b2", 6: "a3*b3",
    }
    full = named([5])
    assert full == {2: "a2", 3: "a3", 4: "a4", 5: "a5"}
    ring, _ = block_invariant_ring(BlockDecomposition(6, [3, 3]))
    assert ring.names == ("a2", "a3", "b2", "b3") and ring.weights == (2, 3, 2, 3)


# The restriction and the block-invariant expression must agree at every point of the
# subtorus.  Restricted polynomials are evaluated on integer numerators in int64 (an
# overflow bound is checked first); homogeneity turns that into the exact value at
# a rational point a/D.  The block side is evaluated with Fractions.

def _int_values(poly, points):
    if poly.is_zero():
        return [0] * len(points)
    terms = list(poly.items())
    E = np.array([m for m, _ in terms], dtype=np.int64)
    C = np.array([int(c) for _, c in terms], dtype=np.int64)
    A = np.array(points, dtype=np.int64)
    bound = sum(abs(int(c)) for _, c in terms) * int(np.abs(A).max()) ** poly.degree()
    assert bound < 2**62
    vals = (C[:, None] * np.prod(A[None, :, :] ** E[:, None, :], axis=2)).sum(axis=0)
    return [int(v) for v in vals]


def _elementary_values(coords):
    """[e_0, e_1, ..., e_q] of the given numbers, by expanding prod (1 + c t)."""
    e = [Fraction(1)]
    for c in coords:
        e = [a + c * b for a, b in zip(e + [Fraction(0)], [Fraction(0)] + e)]
    return e


def _block_values(bd, x):
    """Values of the block invariant ring variables at ambient point x."""
    ring, index = block_invariant_ring(bd)
    vals = [None] * len(ring)
    b = 0
    for off, q in zip(bd.offsets(), bd.blocks):
        if q == 1:
            continue
        e = _elementary_values(x[off : off + q])
        for a in range(2, q + 1):
            vals[index[(b, a)]] = e[a]
        b += 1
    return vals


@pytest.mark.parametrize("n", range(2, 13))
def test_generating_function_identity(n):
    rng = random.Random(n)
    for bd in decompositions(n):
        if bd.n != n:
            continue
        emb = block_embedding(bd)
        ps = dict(zip(range(2, n + 1), restrict(emb)))
        inv = block_invariant_polynomials(bd)
        m = emb.rank
        numerators = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(100)]
        dens = [rng.randint(1, 5) for _ in range(100)]
        lhs = {j: _int_values(p, numerators) for j, p in ps.items()}
        for i, (a, D) in enumerate(zip(numerators, dens)):
            s = [Fraction(v, D) for v in a]
            x = [evaluate(img, s) if not img.is_zero() else Fraction(0) for img in emb.images]
            assert sum(x) == 0
            block_vals = _block_values(bd, x)
            for j in range(2, n + 1):
                rhs = evaluate(inv[j], block_vals) if not inv[j].is_zero() else 0
                assert Fraction(lhs[j][i], D**j) == rhs, (bd, j, s)


def test_coxeter_eigenvector_examples():
    i = root_power(4, 1)
    X = coxeter_eigenvector(4, 1)
    assert X.coordinates == (-i, root_power(4, 2), i, root_power(4, 0))
    assert coxeter_eigenvector(4, 2).coordinates == (-1 + 0 * i, 1 + 0 * i, -1 + 0 * i, 1 + 0 * i)
    total = sum(coxeter_eigenvector(6, 1).coordinates[1:], coxeter_eigenvector(6, 1).coordinates[0])
    assert total.is_zero()
    with pytest.raises(ValueError):
        coxeter_eigenvector(4, 4)


@pytest.mark.parametrize("n", range(2, 17))
def test_eigenvalue_property(n):
    for k in range(1, n):
        X = coxeter_eigenvector(n, k)
        shifted = coxeter_shift(X.coordinates)
        assert shifted == tuple(c * root_power(n, k) for c in X.coordinates)
        assert sum(X.coordinates[1:], X.coordinates[0]).is_zero()


def test_eval_at_eigenvector_examples():
    X = coxeter_eigenvector(4, 1)
    assert eval_at_eigenvector(elementary_symmetric(4, 2), X).is_zero()
    assert eval_at_eigenvector(elementary_symmetric(4, 4), X) == -1
    with pytest.raises(ValueError):
        eval_at_eigenvector(elementary_symmetric(4, 2) + 1, X)


@pytest.mark.parametrize("n", range(2, 13))
def test_only_top_invariant_survives_at_x1(n):
    X = coxeter_eigenvector(n, 1)
    for j in range(2, n):
        assert eval_at_eigenvector(elementary_symmetric(n, j), X).is_zero()
    assert not eval_at_eigenvector(elementary_symmetric(n, n), X).is_zero()


def test_zero_sum_partition_examples():
    assert zero_sum_partition(coxeter_eigenvector(4, 1), [2, 2]) == [[0, 2], [1, 3]]
    assert zero_sum_partition(coxeter_eigenvector(6, 1), [3, 3]) == [[0, 2, 4], [1, 3, 5]]
    assert zero_sum_partition(coxeter_eigenvector(3, 1), [2, 1]) is None
    with pytest.raises(ValueError):
        zero_sum_partition(coxeter_eigenvector(4, 1), [2, 1])


def brute_force_partition_exists(coords, sizes):
    """Try every assignment of indices to blocks, with no pruning or ordering."""
    zero = coords[0] * 0

    def rec(remaining, sizes):
        if not sizes:
            return True
        for combo in combinations(remaining, sizes[0]):
            total = zero
            for i in combo:
                total = total + coords[i]
            if total == zero and rec([i for i in remaining if i not in combo], sizes[1:]):
                return True
        return False

    return rec(list(range(len(coords))), list(sizes))


@pytest.mark.parametrize("n,sizes", [(4, [2, 2]), (6, [3, 3]), (6, [2, 4]), (6, [2, 2, 2]), (5, [2, 3]), (8, [4, 4]), (9, [3, 6]), (6, [1, 5])])
def test_partition_search_agrees_with_brute_force(n, sizes):
    for k in range(1, n):
        X = coxeter_eigenvector(n, k)
        found = zero_sum_partition(X, sizes)
        assert (found is not None) == brute_force_partition_exists(X.coordinates, sizes)
        if found is not None:
            assert sorted(len(b) for b in found) == sorted(sizes)
            assert [len(b) for b in found] == list(sizes)
            assert partition_sums_vanish(X.coordinates, found)


@pytest.mark.parametrize("q,n", [(3, 2), (3, 3), (5, 2), (5, 3)])
def test_residue_partition_coset_identity(q, n):
    N = q * n
    residues = residue_partition(N, n)
    bd = BlockDecomposition(N, [q] * n)
    for k in range(1, N):
        X = coxeter_eigenvector(N, k)
        ok = partition_sums_vanish(X.coordinates, residues)
        assert ok == (k % q != 0)
        if ok:
            assert in_block_torus(relocate(X.coordinates, residues), bd)
