"""Minimal generator counts of graded ideals and homogeneous subalgebra membership.

For a graded ideal I with maximal homogeneous ideal m, a minimal homogeneous
generating set has dim (I/mI)_d elements in degree d, i.e.
rank(I_d) - rank((mI)_d), and (I/mI)_d vanishes outside generator degrees.
Each degree is an independent sparse rank computation.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import DEFAULT_PRIME, UnluckyPrime
from .linalg import EXACT, MODULAR, RankCertificate, new_echelon, solve_combination
from .multipoly import Polynomial, VariableSet, monomials_of_degree

AUTO = "auto"
MODES = (EXACT, MODULAR, AUTO)

EXACT_COLUMN_LIMIT = 5_000
MODULAR_COLUMN_LIMIT = 200_000


class BudgetExceeded(RuntimeError):
    def __init__(self, degree: int, columns: int, limit: int, mode: str):
        self.degree, self.columns, self.limit, self.mode = degree, columns, limit, mode
        super().__init__(
            f"degree-{degree} slice has {columns} columns, above the {mode} limit of {limit}"
        )


@dataclass(frozen=True)
class Budget:
    exact_columns: int = EXACT_COLUMN_LIMIT
    modular_columns: int = MODULAR_COLUMN_LIMIT

    @classmethod
    def capped(cls, max_columns: int | None) -> "Budget":
        if max_columns is None:
            return cls()
        return cls(max_columns, max_columns)

    def choose(self, mode: str, degree: int, columns: int) -> str:
        if mode == EXACT:
            if columns > self.exact_columns:
                raise BudgetExceeded(degree, columns, self.exact_columns, EXACT)
            return EXACT
        if mode == MODULAR:
            if columns > self.modular_columns:
                raise BudgetExceeded(degree, columns, self.modular_columns, MODULAR)
            return MODULAR
        if mode == AUTO:
            if columns <= self.exact_columns:
                return EXACT
            if columns <= self.modular_columns:
                return MODULAR
            raise BudgetExceeded(degree, columns, self.modular_columns, MODULAR)
        raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class IdealPresentation:
    ring: VariableSet
    generators: tuple
    labels: tuple = ()

    def __post_init__(self):
        labels = self.labels or tuple(f"g{i + 1}" for i in range(len(self.generators)))
        if len(labels) != len(self.generators):
            raise ValueError("one label per generator")
        object.__setattr__(self, "labels", tuple(labels))
        for g, lab in zip(self.generators, labels):
            if g.vars != self.ring:
                raise ValueError(f"generator {lab} is not over the presentation ring")
            if g.is_zero():
                raise ValueError(f"generator {lab} is zero")
            if not g.is_homogeneous():
                raise ValueError(f"generator {lab} is not homogeneous")

    @classmethod
    def from_polynomials(cls, ring: VariableSet, polys: Sequence[Polynomial], labels: Sequence[str]):
        """Build a presentation, dropping zero polynomials; returns (presentation, dropped labels)."""
        keep, keep_labels, dropped = [], [], []
        for p, lab in zip(polys, labels):
            if p.is_zero():
                dropped.append(lab)
            else:
                keep.append(p)
                keep_labels.append(lab)
        return cls(ring, tuple(keep), tuple(keep_labels)), dropped

    @property
    def degrees(self) -> tuple:
        return tuple(g.degree() for g in self.generators)


@dataclass
class DegreeSlice:
    degree: int
    columns: list
    rows: list
    sources: list = field(default_factory=list)  # (generator index, multiplier monomial)


def _product_row(g: Polynomial, mult: tuple, col_index: dict) -> dict:
    row = {}
    for mono, c in g.items():
        row[col_index[tuple(a + b for a, b in zip(mono, mult))]] = c
    return row


def slice_rows(I: IdealPresentation, d: int, proper_multiples_only: bool, col_index: dict) -> tuple:
    rows, sources = [], []
    for gi, g in enumerate(I.generators):
        gd = g.degree()
        if gd > d or (proper_multiples_only and gd == d):
            continue
        for mult in monomials_of_degree(I.ring, d - gd):
            rows.append(_product_row(g, mult, col_index))
            sources.append((gi, mult))
    return rows, sources


def slice(I: IdealPresentation, d: int, proper_multiples_only: bool = False) -> DegreeSlice:
    """Spanning rows of I_d, or of (mI)_d when ``proper_multiples_only``."""
    columns = monomials_of_degree(I.ring, d)
    col_index = {m: i for i, m in enumerate(columns)}
    rows, sources = slice_rows(I, d, proper_multiples_only, col_index)
    return DegreeSlice(d, columns, rows, sources)


def fallback_primes(start: int = DEFAULT_PRIME, count: int = 8) -> list:
    """``start`` (if prime) followed by the next primes below it."""
    out, c = [], start
    while len(out) < count and c > 2:
        if _is_prime(c):
            out.append(c)
        c -= 1
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def rank(sl: DegreeSlice, mode: str = EXACT, modulus: int = DEFAULT_PRIME) -> RankCertificate:
    if mode == MODULAR:
        last = None
        for p in fallback_primes(modulus):
            try:
                ech = new_echelon(MODULAR, p)
                for row in sl.rows:
                    ech.add(row)
                return RankCertificate(ech.rank, MODULAR, p, tuple(sorted(ech.pivots)))
            except UnluckyPrime as exc:
                last = exc
        raise last
    ech = new_echelon(EXACT)
    for row in sl.rows:
        ech.add(row)
    return RankCertificate(ech.rank, EXACT, None, tuple(sorted(ech.pivots)))


@dataclass(frozen=True)
class DegreeCount:
    degree: int
    count: int
    mode: str
    modulus: int | None
    columns: int
    rank_mI: int
    rank_I: int

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "count": self.count,
            "mode": self.mode,
            "modulus": self.modulus,
            "columns": self.columns,
            "rank_mI": self.rank_mI,
            "rank_I": self.rank_I,
        }


@dataclass(frozen=True)
class GeneratorCount:
    per_degree: tuple  # DegreeCount, ascending degree
    total: int

    @property
    def exact(self) -> bool:
        return all(c.mode == EXACT for c in self.per_degree)

    def counts(self) -> dict:
        return {c.degree: c.count for c in self.per_degree}


def _degree_count(I: IdealPresentation, d: int, mode: str, modulus: int) -> DegreeCount:
    columns = monomials_of_degree(I.ring, d)
    col_index = {m: i for i, m in enumerate(columns)}
    proper, _ = slice_rows(I, d, True, col_index)
    gens = [_product_row(g, (0,) * len(I.ring), col_index) for g in I.generators if g.degree() == d]
    primes = fallback_primes(modulus) if mode == MODULAR else [None]
    last = None
    for p in primes:
        try:
            ech = new_echelon(mode, p) if p else new_echelon(EXACT)
            for row in proper:
                ech.add(row)
            rank_mI = ech.rank
            for row in gens:
                ech.add(row)
            return DegreeCount(d, ech.rank - rank_mI, mode, p, len(columns), rank_mI, ech.rank)
        except UnluckyPrime as exc:
            last = exc
    raise last


def _degree_count_job(args):
    return _degree_count(*args)


def default_threads() -> int:
    env = os.environ.get("FORMALITY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def minimal_generator_count(
    I: IdealPresentation,
    mode: str = EXACT,
    modulus: int = DEFAULT_PRIME,
    budget: Budget | None = None,
    threads: int | None = None,
) -> GeneratorCount:
    """Per-degree minimal generator counts r_d and their sum r.

    Budget checks run for every degree before any elimination starts.
    """
    budget = budget or Budget()
    degrees = sorted(set(I.degrees))
    jobs = []
    for d in degrees:
        columns = len(monomials_of_degree(I.ring, d))
        jobs.append((I, d, budget.choose(mode, d, columns), modulus))
    threads = threads if threads is not None else default_threads()
    big = sum(len(monomials_of_degree(I.ring, d)) for d in degrees) > 2_000
    if threads > 1 and len(jobs) > 1 and big:
        with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as pool:
            results = list(pool.map(_degree_count_job, jobs))
    else:
        results = [_degree_count(*job) for job in jobs]
    return GeneratorCount(tuple(results), sum(c.count for c in results))


@dataclass(frozen=True)
class Membership:
    member: bool
    degree: int
    exponents: tuple  # exponent vector over the basis, one per candidate product
    coefficients: tuple | None  # Fractions, aligned with ``exponents``; None for non-members

    def combination(self, basis: Sequence[Polynomial]) -> Polynomial:
        """Re-expand the certificate: sum of coefficient * product of basis powers."""
        if not self.member:
            raise ValueError("non-members carry no combination")
        ring = basis[0].vars
        nonzero = [b for b in basis if not b.is_zero()]
        total = Polynomial.zero(ring)
        for exps, c in zip(self.exponents, self.coefficients):
            term = Polynomial.constant(ring, c)
            for b, e in zip(nonzero, exps):
                if e:
                    term = term * b**e
            total = total + term
        return total


def _mono_key(mono: tuple) -> tuple:
    return tuple(-e for e in mono)


def subalgebra_membership(target: Polynomial, basis: Sequence[Polynomial]) -> Membership:
    """Decide whether homogeneous ``target`` lies in the subalgebra generated by ``basis``.

    Only products of basis elements of the target's degree can contribute, so
    this is one exact linear system over Q.  Zero basis elements are ignored.
    """
    if not target.is_homogeneous():
        raise ValueError("target must be homogeneous")
    nonzero = [b for b in basis if not b.is_zero()]
    for b in nonzero:
        if b.vars != target.vars:
            raise ValueError("target and basis live in different rings")
        if not b.is_homogeneous():
            raise ValueError(f"basis element {b} is not homogeneous")
    d = target.degree()
    if target.is_zero():
        return Membership(True, 0, (), ())
    if not nonzero:
        return Membership(False, d, (), None)
    weights = [b.degree() for b in nonzero]
    if any(w == 0 for w in weights):
        raise ValueError("constant basis elements are not allowed")
    exps = monomials_of_degree(VariableSet([f"b{i}" for i in range(len(nonzero))], weights), d)
    powers: dict = {}

    def power(i, e):
        if (i, e) not in powers:
            powers[(i, e)] = nonzero[i] ** e
        return powers[(i, e)]

    rows = []
    for ev in exps:
        prod = Polynomial.constant(target.vars, 1)
        for i, e in enumerate(ev):
            if e:
                prod = prod * power(i, e)
        rows.append({_mono_key(m): Fraction(c) for m, c in prod.items()})
    goal = {_mono_key(m): Fraction(c) for m, c in target.items()}
    coeffs = solve_combination(rows, goal)
    if coeffs is None:
        return Membership(False, d, tuple(exps), None)
    return Membership(True, d, tuple(exps), tuple(coeffs))
