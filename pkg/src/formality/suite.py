"""Desk-scale reproduction of the non-formality results, one row per claim."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from .engine import (
    BOTH,
    INVARIANTS,
    SpaceSpec,
    analyze,
    verify_top_invariant,
    verify_coxeter_relocation,
    verify_family,
)
from .nakayama import AUTO, EXACT, Budget, BudgetExceeded, subalgebra_membership
from .lie_a import BlockDecomposition, block_invariant_polynomials

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclass
class Row:
    claim: str
    status: str
    detail: str
    seconds: float

    def to_dict(self) -> dict:
        return {"claim": self.claim, "status": self.status, "detail": self.detail, "seconds": round(self.seconds, 6)}


def _verification_row(v) -> tuple:
    if v.passed:
        detail = "; ".join(f"{k}={v.data[k]}" for k in ("df", "membership", "dim_B", "partition") if k in v.data)
        return PASS, detail or f"{len(v.checks)} checks"
    bad = v.first_failure()
    return FAIL, f"{bad.name}: {bad.detail or 'failed'}"


def _space_row(n, blocks, expect_df, budget, threads):
    def run():
        rep = analyze(SpaceSpec.blocks(n, blocks), BOTH, EXACT, budget=budget, threads=threads)
        ok = rep.df == expect_df if expect_df is not None else rep.df >= 1
        detail = f"df={rep.df} verdict={rep.verdict} certification={rep.certification}"
        return (PASS if ok else FAIL), detail

    return run


def _p5_membership(corrupt: bool):
    def run():
        polys = block_invariant_polynomials(BlockDecomposition(12, [4, 4, 4]))
        target = polys[5]
        if corrupt:
            target = polys[2] * polys[3]
        mem = subalgebra_membership(target, [polys[2], polys[3]])
        if mem.member:
            return FAIL, "p5 expressed in <<p2,p3>> (expected non-member)"
        return PASS, "p5 non-member of <<p2,p3>> (exact)"

    return run


def _family(q, n, route, budget, threads, corrupt):
    def run():
        return _verification_row(
            verify_family(q, n, route=route, mode=AUTO, budget=budget, threads=threads, corrupt=corrupt)
        )

    return run


def _example(q, corrupt):
    return lambda: _verification_row(verify_coxeter_relocation(q, corrupt=corrupt))


def claims(budget: Budget | None = None, threads: int | None = None, corrupt: bool = False) -> list:
    """(claim label, callable returning (status, detail))."""
    opts = (budget, threads, corrupt)
    return [
        ("P_j(X_1)=0 for 2<=j<n and P_n(X_1)!=0, 2<=n<=12", lambda: _verification_row(verify_top_invariant(12))),
        ("SU(6)/SU(3)xSU(3) non-formal, df=1, both routes", _space_row(6, [3, 3], 1, budget, threads)),
        ("SU(4)/SU(2)xSU(2) formal, df=0, both routes", _space_row(4, [2, 2], 0, budget, threads)),
        ("SU(4): X_1 relocates into SU(2)xSU(2), P4 not in <<P2,P3>>", _example(3, corrupt)),
        ("SU(6): X_1 relocates into SU(4)xSU(2), P6 not in <<P2..P5>>", _example(5, corrupt)),
        ("SU(8): X_1 relocates into SU(6)xSU(2), P8 not in <<P2..P7>>", _example(7, corrupt)),
        ("SU(6)/SU(3)^2 family checks", _family(3, 2, BOTH, *opts)),
        ("SU(9)/SU(3)^3 family checks", _family(3, 3, INVARIANTS, *opts)),
        ("SU(10)/SU(5)^2 family checks", _family(5, 2, INVARIANTS, *opts)),
        ("SU(12)/SU(4)^3: p5 not in <<p2,p3>>", _p5_membership(corrupt)),
        ("SU(8)/SU(4)^2 family checks", _family(4, 2, BOTH, *opts)),
        ("SU(12)/SU(4)^3 family checks", _family(4, 3, INVARIANTS, *opts)),
    ]


def run_suite(
    budget: Budget | None = None,
    threads: int | None = None,
    corrupt: bool = False,
    progress: Callable[[Row], None] | None = None,
) -> list:
    rows = []
    for claim, fn in claims(budget, threads, corrupt):
        start = time.perf_counter()
        try:
            status, detail = fn()
        except BudgetExceeded as exc:
            status, detail = SKIPPED, str(exc)
        row = Row(claim, status, detail, time.perf_counter() - start)
        rows.append(row)
        if progress:
            progress(row)
    return rows


def exit_code(rows: list) -> int:
    statuses = {r.status for r in rows}
    if FAIL in statuses:
        return 1
    if SKIPPED in statuses:
        return 2
    return 0
