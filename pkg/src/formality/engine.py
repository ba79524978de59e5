"""Formality of SU(n)/H via the deficiency df = r - m.

r is the number of minimal homogeneous generators of the ideal generated by
the restrictions p_2..p_n of the SU(n) invariants, m = rank H, and the space
is formal exactly when df = 0.  The ideal can be formed in the cohomology of
the classifying space of the subtorus (``torus`` route, any embedded torus)
or of the block subgroup itself (``invariants`` route, weighted ring of block
invariants); both give the same df.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .exact import DEFAULT_PRIME
from .lie_a import (
    BlockDecomposition,
    TorusEmbedding,
    block_embedding,
    block_invariant_polynomials,
    block_invariant_ring,
    coxeter_eigenvector,
    elementary_symmetric,
    eval_at_eigenvector,
    field_rank,
    full_torus_embedding,
    in_block_torus,
    partition_sums_vanish,
    relocate,
    residue_partition,
    restrict,
    zero_sum_partition,
)
from .linalg import EXACT
from .multipoly import Polynomial, format_poly
from .nakayama import (
    AUTO,
    Budget,
    IdealPresentation,
    minimal_generator_count,
    subalgebra_membership,
)
from .exact import format_cyclotomic

SCHEMA = "formality-report/1"

TORUS = "torus"
INVARIANTS = "invariants"
BOTH = "both"
ROUTES = (TORUS, INVARIANTS, BOTH)

CERTIFIED = "certified-exact"
MONTE_CARLO = "modular-monte-carlo"


class IntegrityError(RuntimeError):
    """Computed values break an invariant that must always hold, such as route agreement or r >= m."""


class UnsupportedRoute(ValueError):
    pass


@dataclass(frozen=True)
class SpaceSpec:
    n: int
    subgroup: BlockDecomposition | TorusEmbedding

    def __post_init__(self):
        if self.subgroup.n != self.n:
            raise ValueError(f"subgroup lives in SU({self.subgroup.n}), not SU({self.n})")
        if self.m < 1:
            raise ValueError("the subgroup must have positive rank")

    @classmethod
    def blocks(cls, n: int, blocks: Sequence[int]) -> "SpaceSpec":
        return cls(n, BlockDecomposition(n, blocks))

    @classmethod
    def full_torus(cls, n: int) -> "SpaceSpec":
        return cls(n, full_torus_embedding(n))

    @property
    def m(self) -> int:
        return self.subgroup.rank

    def embedding(self) -> TorusEmbedding:
        if isinstance(self.subgroup, BlockDecomposition):
            return block_embedding(self.subgroup)
        return self.subgroup

    @property
    def label(self) -> str:
        if isinstance(self.subgroup, BlockDecomposition):
            return self.subgroup.label()
        return f"SU({self.n})/T^{self.m}"

    def describe(self) -> dict:
        """Canonical JSON-ready description (used for cache keys and reports)."""
        if isinstance(self.subgroup, BlockDecomposition):
            return {"n": self.n, "blocks": list(self.subgroup.blocks)}
        return {
            "n": self.n,
            "embedding": [[_fmt_q(c) for c in row] for row in self.subgroup.matrix()],
        }


def _fmt_q(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass
class RouteResult:
    route: str
    r: int
    per_degree: dict
    slices: list
    exact: bool
    generators: list
    dropped: list
    seconds: float

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "per_degree": {str(d): c for d, c in sorted(self.per_degree.items())},
            "slices": self.slices,
            "certification": CERTIFIED if self.exact else MONTE_CARLO,
            "generators": self.generators,
            "dropped_zero_restrictions": self.dropped,
        }


@dataclass
class FormalityReport:
    space: str
    spec: dict
    m: int
    r: int
    per_degree: dict
    df: int
    verdict: str
    certification: str
    route: str
    routes: dict
    notes: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def formal(self) -> bool:
        return self.verdict == "formal"

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "schema": SCHEMA,
            "engine_version": __version__,
            "space": self.space,
            "spec": self.spec,
            "m": self.m,
            "r": self.r,
            "per_degree": {str(d): c for d, c in sorted(self.per_degree.items())},
            "df": self.df,
            "verdict": self.verdict,
            "certification": self.certification,
            "route": self.route,
            "routes": {name: res.to_dict() for name, res in sorted(self.routes.items())},
            "notes": list(self.notes),
        }
        if timings:
            out["timings"] = dict(sorted(self.timings.items()))
        return out


def torus_presentation(spec: SpaceSpec) -> tuple:
    emb = spec.embedding()
    polys = restrict(emb)
    labels = [f"p{j}" for j in range(2, spec.n + 1)]
    return IdealPresentation.from_polynomials(emb.sub, polys, labels)


def invariant_presentation(spec: SpaceSpec) -> tuple:
    if not isinstance(spec.subgroup, BlockDecomposition):
        raise UnsupportedRoute("the invariants route needs a block decomposition")
    ring, _ = block_invariant_ring(spec.subgroup)
    polys = block_invariant_polynomials(spec.subgroup)
    return IdealPresentation.from_polynomials(ring, list(polys.values()), [f"p{j}" for j in polys])


def _run_route(route, presentation, mode, modulus, budget, threads) -> RouteResult:
    start = time.perf_counter()
    ideal, dropped = presentation
    count = minimal_generator_count(ideal, mode, modulus, budget, threads)
    return RouteResult(
        route=route,
        r=count.total,
        per_degree=count.counts(),
        slices=[c.to_dict() for c in count.per_degree],
        exact=count.exact,
        generators=[f"{lab} = {format_poly(g)}" for lab, g in zip(ideal.labels, ideal.generators)]
        if len(ideal.ring) <= 12
        else list(ideal.labels),
        dropped=dropped,
        seconds=time.perf_counter() - start,
    )


def _report(spec: SpaceSpec, route: str, results: dict) -> FormalityReport:
    first = next(iter(results.values()))
    dfs = {name: res.r - spec.m for name, res in results.items()}
    if len(set(dfs.values())) > 1:
        raise IntegrityError(f"routes disagree on the deficiency of {spec.label}: {dfs}")
    for name, res in results.items():
        if res.per_degree != first.per_degree:
            raise IntegrityError(f"routes disagree on per-degree counts: {name}")
    df = dfs[first.route]
    if df < 0:
        raise IntegrityError(f"r = {first.r} < m = {spec.m} for {spec.label}")
    notes = []
    for res in results.values():
        for lab in res.dropped:
            notes.append(f"{res.route}: {lab} restricts to zero and was dropped")
    exact = all(res.exact for res in results.values())
    timings = {f"{name}_seconds": round(res.seconds, 6) for name, res in results.items()}
    return FormalityReport(
        space=spec.label,
        spec=spec.describe(),
        m=spec.m,
        r=first.r,
        per_degree=dict(first.per_degree),
        df=df,
        verdict="formal" if df == 0 else "non-formal",
        certification=CERTIFIED if exact else MONTE_CARLO,
        route=route,
        routes=results,
        notes=notes,
        timings=timings,
    )


def deficiency_via_torus(
    spec: SpaceSpec,
    mode: str = AUTO,
    modulus: int = DEFAULT_PRIME,
    budget: Budget | None = None,
    threads: int | None = None,
) -> FormalityReport:
    res = _run_route(TORUS, torus_presentation(spec), mode, modulus, budget, threads)
    return _report(spec, TORUS, {TORUS: res})


def deficiency_via_invariants(
    spec: SpaceSpec,
    mode: str = AUTO,
    modulus: int = DEFAULT_PRIME,
    budget: Budget | None = None,
    threads: int | None = None,
) -> FormalityReport:
    res = _run_route(INVARIANTS, invariant_presentation(spec), mode, modulus, budget, threads)
    return _report(spec, INVARIANTS, {INVARIANTS: res})


def analyze(
    spec: SpaceSpec,
    route: str = BOTH,
    mode: str = AUTO,
    modulus: int = DEFAULT_PRIME,
    budget: Budget | None = None,
    threads: int | None = None,
) -> FormalityReport:
    """Deficiency by the requested route(s); with ``both`` the values must agree."""
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}")
    start = time.perf_counter()
    results = {}
    if route in (INVARIANTS, BOTH):
        results[INVARIANTS] = _run_route(
            INVARIANTS, invariant_presentation(spec), mode, modulus, budget, threads
        )
    if route in (TORUS, BOTH):
        results[TORUS] = _run_route(TORUS, torus_presentation(spec), mode, modulus, budget, threads)
    report = _report(spec, route, results)
    report.timings["total_seconds"] = round(time.perf_counter() - start, 6)
    return report


# verification of the concrete claims


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class Verification:
    title: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        return bool(passed)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "data": self.data,
        }


def verify_top_invariant(n_max: int) -> Verification:
    """P_j(X_1) = 0 for 2 <= j <= n-1 and P_n(X_1) != 0, for 2 <= n <= n_max."""
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    v = Verification(f"top invariant is the only one not vanishing at X_1, n <= {n_max}")
    table = []
    for n in range(2, n_max + 1):
        X = coxeter_eigenvector(n, 1)
        for j in range(2, n + 1):
            value = eval_at_eigenvector(elementary_symmetric(n, j), X)
            expect_zero = j < n
            ok = value.is_zero() == expect_zero
            table.append({"n": n, "j": j, "value": format_cyclotomic(value), "ok": ok})
            v.add(f"n={n} j={j}", ok, f"P{j}(X1) = {format_cyclotomic(value)}")
    v.data["table"] = table
    return v


def _is_odd_prime(q: int) -> bool:
    return q > 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def _corrupted(target: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    # negative control: replace the target by a product of basis elements
    # of the same degree, which is a member by construction
    d = target.degree()
    by_degree = {b.degree(): b for b in basis if not b.is_zero()}
    if 2 in by_degree and d - 2 in by_degree:
        return by_degree[2] * by_degree[d - 2]
    if 2 in by_degree and d % 2 == 0:
        return by_degree[2] ** (d // 2)
    return target


def verify_coxeter_relocation(q: int, corrupt: bool = False) -> Verification:
    """X_1 of SU(q+1) relocates into the torus of SU(q-1) x SU(2), and
    P_{q+1} is not a polynomial in P_2..P_q on the full torus."""
    if not _is_odd_prime(q):
        raise ValueError(f"q = {q} is not an odd prime")
    n = q + 1
    v = Verification(f"SU({n}) eigenvector X_1 and P_{n} outside <<P_2..P_{q}>>")
    X = coxeter_eigenvector(n, 1)
    part = zero_sum_partition(X, [q - 1, 2])
    v.data["partition"] = part
    if not v.add("zero-sum partition [q-1, 2] exists", part is not None):
        return v
    sub_bd = BlockDecomposition(n, [q - 1, 2])
    v.add("relocated X_1 lies in s'(C)", in_block_torus(relocate(X.coordinates, part), sub_bd))

    emb = full_torus_embedding(n)
    ps = dict(zip(range(2, n + 1), restrict(emb)))
    target, basis = ps[n], [ps[j] for j in range(2, n)]
    if corrupt:
        target = _corrupted(target, basis)
    mem = subalgebra_membership(target, basis)
    v.data["membership"] = "member" if mem.member else "non-member"
    v.add(f"P{n} not in <<P2..P{q}>> (exact)", not mem.member, v.data["membership"])

    values = {j: eval_at_eigenvector(elementary_symmetric(n, j), X) for j in range(2, n + 1)}
    lower_vanish = all(values[j].is_zero() for j in range(2, n))
    v.add(
        "eigenvector evidence agrees with membership",
        not (lower_vanish and not values[n].is_zero()) or not mem.member,
        f"P{n}(X1) = {format_cyclotomic(values[n])}",
    )
    return v


FAMILY_QS = (3, 5, 7, 4)


def verify_family(
    q: int,
    n: int,
    route: str = INVARIANTS,
    mode: str = AUTO,
    modulus: int = DEFAULT_PRIME,
    budget: Budget | None = None,
    threads: int | None = None,
    corrupt: bool = False,
) -> Verification:
    """SU(qn)/SU(q)^n: eigenvector relocation, dimension count, membership, df >= 1."""
    if q not in FAMILY_QS:
        raise ValueError(f"q must be one of {FAMILY_QS}")
    if n < 2:
        raise ValueError("the family starts at n = 2")
    N = q * n
    bd = BlockDecomposition(N, [q] * n)
    spec = SpaceSpec(N, bd)
    v = Verification(f"{bd.label()} is non-formal")

    # (a) relocation of the eigenvectors X_k, k not a multiple of q
    residues = residue_partition(N, n)
    B = [k for k in range(1, N) if k % q]
    relocated = []
    for k in B:
        X = coxeter_eigenvector(N, k)
        found = zero_sum_partition(X, [q] * n)
        if not v.add(f"X_{k}: zero-sum partition exists", found is not None):
            return v
        ok = partition_sums_vanish(X.coordinates, residues)
        if not v.add(f"X_{k}: residues mod {n} sum to zero", ok):
            return v
        relocated.append(relocate(X.coordinates, residues))
    multiples_fail = all(
        not partition_sums_vanish(coxeter_eigenvector(N, k).coordinates, residues)
        for k in range(q, N, q)
    )
    v.add("X_k with q | k fail the residue partition", multiples_fail)

    # (b) the relocated vectors span the subgroup torus
    inside = all(in_block_torus(pt, bd) for pt in relocated)
    v.add("relocated X_k lie in s(C)", inside)
    dim = field_rank(relocated)
    v.data["dim_B"] = dim
    v.add(f"dim <B> = (q-1)n = {bd.rank}", dim == bd.rank == len(B), f"dim <B> = {dim}")

    # (d) exact membership sub-check on the same ring as the route
    if route == TORUS:
        ideal_polys = dict(zip(range(2, N + 1), restrict(block_embedding(bd))))
    else:
        ideal_polys = block_invariant_polynomials(bd)
    target = ideal_polys[q + 1]
    basis = [ideal_polys[j] for j in range(2, q + 1)]
    if corrupt:
        target = _corrupted(target, basis)
    mem = subalgebra_membership(target, basis)
    v.data["membership"] = "member" if mem.member else "non-member"
    v.add(f"p{q + 1} not in <<p2..p{q}>> (exact)", not mem.member, v.data["membership"])

    # (c) deficiency
    report = analyze(spec, route, mode, modulus, budget, threads)
    v.data["report"] = report.to_dict(timings=False)
    v.data["df"] = report.df
    v.data["certification"] = report.certification
    bound = spec.m + (0 if mem.member else 1)
    v.data["membership_lower_bound_r"] = bound
    v.add("membership bound <= Nakayama r", bound <= report.r, f"bound {bound}, r {report.r}")
    backed = report.certification == CERTIFIED or not mem.member
    v.data["verdict_certification"] = CERTIFIED if backed else MONTE_CARLO
    v.add("df >= 1, non-formal", report.df >= 1 and not report.formal, f"df = {report.df}")
    return v
