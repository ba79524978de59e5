"""Sparse row echelon over Q (fraction-free) and over prime fields.

Rows are dicts ``{column: coefficient}``.  Elimination is incremental: each
incoming row is reduced against the pivot rows found so far by its leading
(smallest) column, so the pivot list depends only on row order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .exact import DEFAULT_PRIME, UnluckyPrime

EXACT = "exact"
MODULAR = "modular"


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    mode: str
    modulus: int | None = None
    pivots: tuple = field(default=())

    def to_dict(self) -> dict:
        return {"rank": self.rank, "mode": self.mode, "modulus": self.modulus, "pivots": list(self.pivots)}


def integer_row(row: dict) -> dict:
    """Scale a rational row to a primitive integer row (same span)."""
    if not row:
        return {}
    den = lcm(*(Fraction(c).denominator for c in row.values()))
    ints = {k: int(Fraction(c) * den) for k, c in row.items() if c != 0}
    g = gcd(*ints.values())
    if g > 1:
        ints = {k: v // g for k, v in ints.items()}
    # sign normalisation keeps pivot rows canonical
    if ints and ints[min(ints)] < 0:
        ints = {k: -v for k, v in ints.items()}
    return ints


class ExactEchelon:
    """Incremental fraction-free echelon form over Q."""

    def __init__(self):
        self.pivots: dict = {}
        self.order: list = []

    def reduce(self, row: dict) -> dict:
        row = integer_row(row)
        pivots = self.pivots
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                return row
            a, b = prow[lead], row[lead]
            g = gcd(a, b)
            a, b = a // g, b // g
            out = {k: a * v for k, v in row.items()}
            for k, v in prow.items():
                s = out.get(k, 0) - b * v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            if out:
                g = gcd(*out.values())
                if g > 1:
                    out = {k: v // g for k, v in out.items()}
            row = out
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; True if it raised the rank."""
        red = self.reduce(row)
        if not red:
            return False
        lead = min(red)
        if red[lead] < 0:
            red = {k: -v for k, v in red.items()}
        self.pivots[lead] = red
        self.order.append(lead)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


class ModularEchelon:
    """Incremental echelon form over Z/pZ; pivot rows are scaled to a leading 1."""

    def __init__(self, modulus: int = DEFAULT_PRIME):
        self.modulus = modulus
        self.pivots: dict = {}
        self.order: list = []

    def convert(self, row: dict) -> dict:
        p = self.modulus
        out = {}
        for k, c in row.items():
            if isinstance(c, Fraction):
                den = c.denominator % p
                if den == 0:
                    raise UnluckyPrime(f"denominator {c.denominator} vanishes mod {p}")
                v = c.numerator * pow(den, -1, p) % p
            else:
                v = int(c) % p
            if v:
                out[k] = v
        return out

    def reduce(self, row: dict) -> dict:
        p = self.modulus
        row = self.convert(row)
        pivots = self.pivots
        while row:
            lead = min(row)
            prow = pivots.get(lead)
            if prow is None:
                return row
            f = row[lead]
            for k, v in prow.items():
                s = (row.get(k, 0) - f * v) % p
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        red = self.reduce(row)
        if not red:
            return False
        p = self.modulus
        lead = min(red)
        inv = pow(red[lead], -1, p)
        self.pivots[lead] = {k: v * inv % p for k, v in red.items()}
        self.order.append(lead)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def new_echelon(mode: str, modulus: int = DEFAULT_PRIME):
    if mode == EXACT:
        return ExactEchelon()
    if mode == MODULAR:
        return ModularEchelon(modulus)
    raise ValueError(f"unknown rank mode {mode!r}")


def matrix_rank(rows, mode: str = EXACT, modulus: int = DEFAULT_PRIME) -> RankCertificate:
    """Rank of a list of sparse rows (dicts) or dense rows (sequences)."""
    ech = new_echelon(mode, modulus)
    for row in rows:
        if not isinstance(row, dict):
            row = {i: c for i, c in enumerate(row) if c != 0}
        ech.add(row)
    return RankCertificate(
        rank=ech.rank,
        mode=mode,
        modulus=modulus if mode == MODULAR else None,
        pivots=tuple(sorted(ech.pivots)),
    )


def solve_combination(rows: list, target: dict):
    """Exact rational coefficients ``c`` with ``sum(c[i] * rows[i]) == target``, or None.

    Gauss-Jordan over Fractions while tracking each pivot row as a
    combination of the input rows; intended for few rows.
    """
    pivots: dict = {}  # col -> (row with leading 1, combination)

    def reduce(vec: dict, comb: dict):
        vec, comb = dict(vec), dict(comb)
        while vec:
            lead = min(vec)
            if lead not in pivots:
                break
            f = vec[lead]
            prow, pcomb = pivots[lead]
            for k, v in prow.items():
                s = vec.get(k, 0) - f * v
                if s:
                    vec[k] = s
                else:
                    vec.pop(k, None)
            for k, v in pcomb.items():
                s = comb.get(k, 0) - f * v
                if s:
                    comb[k] = s
                else:
                    comb.pop(k, None)
        return vec, comb

    for i, row in enumerate(rows):
        vec = {k: Fraction(c) for k, c in row.items() if c != 0}
        vec, comb = reduce(vec, {i: Fraction(1)})
        if vec:
            lead = min(vec)
            inv = 1 / vec[lead]
            pivots[lead] = ({k: v * inv for k, v in vec.items()}, {k: v * inv for k, v in comb.items()})

    residual, comb = reduce({k: Fraction(c) for k, c in target.items() if c != 0}, {})
    if residual:
        return None
    # target - sum(comb) reduced to zero, so target = -comb
    return [-comb.get(i, Fraction(0)) for i in range(len(rows))]
