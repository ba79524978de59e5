"""Exact coefficient arithmetic.

Rationals are ``fractions.Fraction``.  This module adds prime-field elements
and elements of the cyclotomic field Q(zeta_N), stored as polynomials in
zeta_N reduced modulo the N-th cyclotomic polynomial so that zero-testing is
coefficient-wise.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .multipoly import Polynomial, VariableSet

DEFAULT_PRIME = 2**31 - 1

Rational = Fraction


class UnluckyPrime(ArithmeticError):
    """A denominator is divisible by the modulus; retry with another prime."""


class OrderMismatch(ValueError):
    """Cyclotomic operands of different orders; embed into a common order first."""


# prime fields


class GF:
    """Element of Z/pZ."""

    __slots__ = ("residue", "modulus")

    def __init__(self, value, modulus: int = DEFAULT_PRIME):
        self.modulus = modulus
        if isinstance(value, GF):
            value = value.residue
        if isinstance(value, Fraction):
            den = value.denominator % modulus
            if den == 0:
                raise UnluckyPrime(f"denominator {value.denominator} vanishes mod {modulus}")
            value = value.numerator * pow(den, -1, modulus)
        self.residue = value % modulus

    def _other(self, other) -> int:
        if isinstance(other, GF):
            if other.modulus != self.modulus:
                raise ValueError("prime-field moduli differ")
            return other.residue
        return GF(other, self.modulus).residue

    def __add__(self, other):
        return GF(self.residue + self._other(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return GF(self.residue - self._other(other), self.modulus)

    def __rsub__(self, other):
        return GF(self._other(other) - self.residue, self.modulus)

    def __mul__(self, other):
        return GF(self.residue * self._other(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return GF(-self.residue, self.modulus)

    def inverse(self) -> "GF":
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse")
        return GF(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * GF(self._other(other), self.modulus).inverse()

    def __pow__(self, k: int):
        return GF(pow(self.residue, k, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, GF):
            return self.modulus == other.modulus and self.residue == other.residue
        try:
            return self.residue == GF(other, self.modulus).residue
        except (TypeError, UnluckyPrime):
            return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __repr__(self):
        return f"GF({self.residue}, {self.modulus})"


# cyclotomic polynomials


def _divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_mul(a: list, b: list) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_exact_div(num: list, den: list) -> list:
    """Exact division of integer polynomials (low-to-high coefficients), monic ``den``."""
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j, d in enumerate(den):
                num[i - dn + j] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("division is not exact")
    return quot


def _mobius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def cyclotomic_coefficients(n: int) -> tuple:
    """Integer coefficients of Phi_n, lowest degree first.

    Uses Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}: multiply the factors with
    mu = +1, then divide exactly by those with mu = -1.
    """
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    num, den = [1], [1]
    for d in _divisors(n):
        mu = _mobius(n // d)
        if mu == 0:
            continue
        factor = [-1] + [0] * (d - 1) + [1]
        if mu == 1:
            num = _poly_mul(num, factor)
        else:
            den = _poly_mul(den, factor)
    # den is a product of (x^d - 1); make it monic up to sign
    if den[-1] == -1:
        den = [-c for c in den]
        num = [-c for c in num]
    return tuple(_poly_exact_div(num, den))


def cyclotomic_polynomial(n: int) -> Polynomial:
    coeffs = cyclotomic_coefficients(n)
    x = VariableSet(["x"])
    return Polynomial(x, {(i,): c for i, c in enumerate(coeffs) if c})


def euler_phi(n: int) -> int:
    return len(cyclotomic_coefficients(n)) - 1


def _reduce(coeffs: list, n: int) -> list:
    """Reduce an integer coefficient list modulo Phi_n (monic)."""
    phi = cyclotomic_coefficients(n)
    deg = len(phi) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = 0
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    coeffs[base + j] -= c * phi[j]
    coeffs = coeffs[:deg]
    return coeffs + [0] * (deg - len(coeffs))


class CyclotomicElem:
    """Element of Q(zeta_N) as ``sum(coefficients[i] * zeta_N**i)``, i < phi(N).

    Stored as integer numerators over one positive common denominator.
    """

    __slots__ = ("order", "_num", "_den")

    def __init__(self, order: int, coefficients):
        coefficients = [Fraction(c) for c in coefficients]
        deg = euler_phi(order)
        if len(coefficients) > deg:
            den = lcm(*(c.denominator for c in coefficients)) if coefficients else 1
            nums = _reduce([int(c * den) for c in coefficients], order)
        else:
            den = lcm(*(c.denominator for c in coefficients)) if coefficients else 1
            nums = [int(c * den) for c in coefficients] + [0] * (deg - len(coefficients))
        self._set(order, nums, den)

    def _set(self, order, nums, den):
        g = gcd(den, *nums)
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
        self.order = order
        self._num = tuple(nums)
        self._den = den

    @classmethod
    def _make(cls, order: int, nums: list, den: int = 1) -> "CyclotomicElem":
        e = cls.__new__(cls)
        e._set(order, nums, den)
        return e

    @classmethod
    def scalar(cls, order: int, c) -> "CyclotomicElem":
        c = Fraction(c)
        return cls._make(order, [c.numerator] + [0] * (euler_phi(order) - 1), c.denominator)

    @property
    def coefficients(self) -> tuple:
        return tuple(Fraction(x, self._den) for x in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def _lift(self, other) -> "CyclotomicElem":
        if isinstance(other, CyclotomicElem):
            if other.order != self.order:
                raise OrderMismatch(f"orders {self.order} and {other.order} differ")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElem.scalar(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d1, d2 = self._den, other._den
        if d1 == d2:
            return CyclotomicElem._make(self.order, [a + b for a, b in zip(self._num, other._num)], d1)
        return CyclotomicElem._make(
            self.order, [a * d2 + b * d1 for a, b in zip(self._num, other._num)], d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElem._make(self.order, [-a for a in self._num], self._den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return CyclotomicElem._make(
                self.order, [a * c.numerator for a in self._num], self._den * c.denominator
            )
        other = self._lift(other)
        if other is NotImplemented:
            return other
        prod = _poly_mul(list(self._num), list(other._num))
        return CyclotomicElem._make(self.order, _reduce(prod, self.order), self._den * other._den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicElem.scalar(self.order, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "CyclotomicElem":
        """Inverse via the extended Euclidean algorithm against Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse in a cyclotomic field")
        a = _trim([Fraction(x, self._den) for x in self._num])
        b = [Fraction(c) for c in cyclotomic_coefficients(self.order)]
        # invariant: s*self == r0 (mod Phi)
        r0, r1 = a, b
        s0, s1 = [Fraction(1)], [Fraction(0)]
        while len(r1) > 1 or r1[0] != 0:
            q, rem = _divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _sub(s0, _mul(q, s1))
        # r0 is a nonzero constant
        c = r0[0]
        return CyclotomicElem(self.order, [x / c for x in s0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * self._lift(other).inverse()

    def embed(self, order: int) -> "CyclotomicElem":
        """Image in Q(zeta_order) under zeta_N -> zeta_order^(order/N)."""
        if order % self.order:
            raise OrderMismatch(f"{self.order} does not divide {order}")
        step = order // self.order
        coeffs = [0] * (step * (len(self._num) - 1) + 1)
        for i, a in enumerate(self._num):
            coeffs[i * step] = a
        return CyclotomicElem._make(order, _reduce(coeffs, order), self._den)

    def __eq__(self, other):
        if isinstance(other, CyclotomicElem):
            return self.order == other.order and self._num == other._num and self._den == other._den
        if isinstance(other, (int, Fraction)):
            return self == CyclotomicElem.scalar(self.order, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self._num, self._den))

    def __repr__(self):
        return f"CyclotomicElem({self.order}, {format_cyclotomic(self)!r})"

    def __str__(self):
        return format_cyclotomic(self)


def _trim(p: list) -> list:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p or [Fraction(0)]


def _mul(a: list, b: list) -> list:
    return _trim(_poly_mul(a, b))


def _sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _divmod(a: list, b: list) -> tuple:
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], _trim(a)
    q = [Fraction(0)] * (len(a) - db)
    lead = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] / lead
        if c:
            q[i - db] = c
            for j, y in enumerate(b):
                a[i - db + j] -= c * y
    return _trim(q), _trim(a[:db] if db else [Fraction(0)])


def format_cyclotomic(e: CyclotomicElem, symbol: str = "z") -> str:
    """Canonical text ``a0 + a1*z + a2*z^2 ...`` (zero terms omitted)."""
    pieces = []
    for i, c in enumerate(e.coefficients):
        if c == 0:
            continue
        mag = abs(c)
        mag_s = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if i == 0:
            body = mag_s
        else:
            power = symbol if i == 1 else f"{symbol}^{i}"
            body = power if mag == 1 else f"{mag_s}*{power}"
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces) or "0"


@lru_cache(maxsize=4096)
def root_power(n: int, k: int) -> CyclotomicElem:
    """zeta_n ** k as a canonical element of Q(zeta_n)."""
    if n < 1:
        raise ValueError("order must be positive")
    k %= n
    coeffs = [0] * (k + 1)
    coeffs[k] = 1
    return CyclotomicElem._make(n, _reduce(coeffs, n), 1)


def cyclo_arith(a: CyclotomicElem, b: CyclotomicElem, op: str) -> CyclotomicElem:
    if a.order != b.order:
        raise OrderMismatch(f"orders {a.order} and {b.order} differ; embed into lcm first")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def unify(a: CyclotomicElem, b: CyclotomicElem) -> tuple:
    """Embed two elements into Q(zeta_lcm)."""
    L = lcm(a.order, b.order)
    return a.embed(L), b.embed(L)
