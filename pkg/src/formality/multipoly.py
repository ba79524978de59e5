"""Sparse multivariate polynomials with weighted grading.

Coefficients are any exact field elements supporting ``+ - *`` and ``== 0``:
``int``/``Fraction`` (integral fractions are stored as ``int``), prime-field
elements, or cyclotomic elements.  Monomials are exponent tuples in variable
declaration order.  The canonical order is graded lexicographic: higher
weighted degree first, then exponent tuples in descending lexicographic order.
"""

from __future__ import annotations

import re
from operator import add
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

Monomial = tuple


class VariableMismatch(ValueError):
    pass


def normalize_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


@dataclass(frozen=True)
class VariableSet:
    names: tuple
    weights: tuple

    def __init__(self, names: Iterable[str], weights: Iterable[int] | None = None):
        names = tuple(names)
        weights = tuple(weights) if weights is not None else (1,) * len(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if len(weights) != len(names):
            raise ValueError("one weight per variable required")
        if any(w < 1 for w in weights):
            raise ValueError("variable weights must be >= 1")
        for name in names:
            if not _IDENT.fullmatch(name):
                raise ValueError(f"invalid variable name {name!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def standard(cls, prefix: str, count: int) -> "VariableSet":
        return cls([f"{prefix}{i}" for i in range(1, count + 1)])

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def degree(self, mono: Monomial) -> int:
        return sum(e * w for e, w in zip(mono, self.weights))

    def unit(self, i: int) -> Monomial:
        return tuple(1 if j == i else 0 for j in range(len(self.names)))

    @property
    def is_standard(self) -> bool:
        return all(w == 1 for w in self.weights)


def _gradlex_key(vars: VariableSet):
    def key(mono):
        return (-vars.degree(mono), tuple(-e for e in mono))

    return key


class Polynomial:
    """Immutable sparse polynomial over ``vars``.

    ``terms`` maps exponent tuples to nonzero coefficients.
    """

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: VariableSet, terms: Mapping | None = None):
        self.vars = vars
        clean = {}
        if terms:
            n = len(vars)
            for mono, c in terms.items():
                if len(mono) != n:
                    raise ValueError(f"monomial {mono} has wrong length for {n} variables")
                if c != 0:
                    clean[tuple(mono)] = normalize_coeff(c)
        self._terms = clean
        self._hash = None

    # constructors

    @classmethod
    def zero(cls, vars: VariableSet) -> "Polynomial":
        return cls(vars)

    @classmethod
    def constant(cls, vars: VariableSet, c) -> "Polynomial":
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, vars: VariableSet, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else vars.index(name_or_index)
        return cls(vars, {vars.unit(i): 1})

    @classmethod
    def _raw(cls, vars: VariableSet, terms: dict) -> "Polynomial":
        # terms already cleaned of zeros
        p = cls.__new__(cls)
        p.vars = vars
        p._terms = terms
        p._hash = None
        return p

    # inspection

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, mono: Monomial):
        return self._terms.get(tuple(mono), 0)

    def degrees(self) -> set:
        return {self.vars.degree(m) for m in self._terms}

    def degree(self) -> int:
        """Maximum weighted degree; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda t: _gradlex_key(self.vars)(t[0]))

    def homogeneous_component(self, d: int) -> "Polynomial":
        deg = self.vars.degree
        return Polynomial._raw(self.vars, {m: c for m, c in self._terms.items() if deg(m) == d})

    # arithmetic

    def _check(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise VariableMismatch(f"variable sets differ: {self.vars.names} vs {other.vars.names}")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.vars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = normalize_coeff(s)
        return Polynomial._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.vars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if other == 0:
                return Polynomial.zero(self.vars)
            return Polynomial._raw(
                self.vars, {m: normalize_coeff(c * other) for m, c in self._terms.items()}
            )
        self._check(other)
        out: dict = {}
        get = out.get
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(map(add, m1, m2))
                out[m] = get(m, 0) + c1 * c2
        return Polynomial(self.vars, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Polynomial.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self._terms == other._terms
        if other == 0:
            return not self._terms
        return self == Polynomial.constant(self.vars, other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    def map_coeffs(self, f) -> "Polynomial":
        return Polynomial(self.vars, {m: f(c) for m, c in self._terms.items()})


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.vars != b.vars:
        raise VariableMismatch("poly_arith needs a common variable set")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def linear_substitute(p: Polynomial, images, target: VariableSet) -> Polynomial:
    """Replace each variable of ``p`` by a linear form over ``target``.

    ``images`` is a mapping from source variable name to a Polynomial over
    ``target`` (or a sequence in declaration order).
    """
    if not target.is_standard:
        raise ValueError("linear substitution targets must have unit weights")
    src = p.vars
    if isinstance(images, Mapping):
        missing = [n for n in src.names if n not in images]
        if missing:
            raise KeyError(f"no image for variable(s) {missing}")
        forms = [images[n] for n in src.names]
    else:
        forms = list(images)
        if len(forms) != len(src):
            raise KeyError(f"expected {len(src)} images, got {len(forms)}")
    for name, f in zip(src.names, forms):
        if f.vars != target:
            raise VariableMismatch(f"image of {name} is not over the target variables")
        if any(target.degree(m) != 1 for m in f._terms):
            raise ValueError(f"image of {name} is not a homogeneous linear form: {f}")

    powers = [[Polynomial.constant(target, 1), f] for f in forms]

    def power(i, e):
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * forms[i])
        return cache[e]

    acc: dict = {}
    for mono, c in p._terms.items():
        term = Polynomial.constant(target, c)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
                if term.is_zero():
                    break
        for m, v in term._terms.items():
            acc[m] = acc.get(m, 0) + v
    return Polynomial(target, acc)


def evaluate(p: Polynomial, point: Sequence):
    """Value of ``p`` at ``point``; entries may be any ring elements."""
    if len(point) != len(p.vars):
        raise ValueError(f"point has {len(point)} entries, polynomial has {len(p.vars)} variables")
    orders = {getattr(x, "order", None) for x in point} - {None}
    if len(orders) > 1:
        raise ValueError(f"point entries mix cyclotomic orders {sorted(orders)}")
    pow_cache: dict = {}

    def power(i, e):
        key = (i, e)
        if key not in pow_cache:
            pow_cache[key] = point[i] ** e
        return pow_cache[key]

    total = None
    for mono, c in p._terms.items():
        val = None
        for i, e in enumerate(mono):
            if e:
                f = power(i, e)
                val = f if val is None else val * f
        term = c if val is None else val * c
        total = term if total is None else total + term
    if total is None:
        # zero polynomial: a zero of the point's ring where possible
        return point[0] * 0 if point else 0
    if orders and not hasattr(total, "order"):
        # constant polynomial evaluated at a cyclotomic point
        return point[0] * 0 + total
    return total


@lru_cache(maxsize=4096)
def _monomials(weights: tuple, d: int) -> tuple:
    if not weights:
        return ((),) if d == 0 else ()
    w, rest = weights[0], weights[1:]
    out = []
    for e in range(d // w, -1, -1):
        for tail in _monomials(rest, d - e * w):
            out.append((e,) + tail)
    return tuple(out)


def monomials_of_degree(vars: VariableSet, d: int) -> list:
    """All monomials of weighted degree ``d`` in canonical (descending lex) order."""
    if d < 0:
        return []
    return list(_monomials(vars.weights, d))


def homogeneous_component(p: Polynomial, d: int) -> Polynomial:
    return p.homogeneous_component(d)


# text format

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(\*)|([+-])|(\()|(\)))")


def _format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def format_poly(p: Polynomial) -> str:
    """Canonical text, e.g. ``-s1^2 - s2^2`` or ``3/2*x1*x2 + 1``."""
    if p.is_zero():
        return "0"
    pieces = []
    for mono, c in p.sorted_terms():
        factors = []
        for name, e in zip(p.vars.names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        negative = _is_negative(c)
        mag = -c if negative else c
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{_format_coeff(mag)}*{body}"
        else:
            body = _format_coeff(mag)
        if not pieces:
            pieces.append(("-" if negative else "") + body)
        else:
            pieces.append((" - " if negative else " + ") + body)
    return "".join(pieces)


def _is_negative(c) -> bool:
    try:
        return c < 0
    except TypeError:
        return False


def parse_poly(text: str, vars: VariableSet) -> Polynomial:
    """Parse a polynomial over ``vars``.

    Grammar::

        poly   := ["+"|"-"] term (("+"|"-") term)*
        term   := factor ("*" factor)*
        factor := integer ["/" integer] | name ["^" integer] | "(" poly ")" ["^" integer]
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        kind = m.lastindex
        tokens.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    tokens.append((0, ""))
    parser = _Parser(tokens, vars)
    result = parser.poly()
    if parser.peek()[0] != 0:
        raise ValueError(f"trailing input in {text!r}")
    return result


class _Parser:
    NUM, NAME, CARET, STAR, SIGN, LPAR, RPAR = range(1, 8)

    def __init__(self, tokens, vars):
        self.tokens = tokens
        self.i = 0
        self.vars = vars

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ValueError(f"unexpected token {tok[1]!r}")
        self.i += 1
        return tok

    def poly(self):
        sign = 1
        if self.peek()[0] == self.SIGN:
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.term() * sign
        while self.peek()[0] == self.SIGN:
            s = self.take()[1]
            t = self.term()
            acc = acc + t if s == "+" else acc - t
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == self.STAR:
            self.take()
            acc = acc * self.factor()
        return acc

    def exponent(self):
        if self.peek()[0] == self.CARET:
            self.take()
            tok = self.take(self.NUM)
            if "/" in tok[1]:
                raise ValueError("exponents must be integers")
            return int(tok[1])
        return 1

    def factor(self):
        kind, val = self.peek()
        if kind == self.NUM:
            self.take()
            return Polynomial.constant(self.vars, Fraction(val))
        if kind == self.NAME:
            self.take()
            if val not in self.vars.names:
                raise ValueError(f"unknown variable {val!r}")
            return Polynomial.variable(self.vars, val) ** self.exponent()
        if kind == self.LPAR:
            self.take()
            inner = self.poly()
            self.take(self.RPAR)
            return inner ** self.exponent()
        raise ValueError(f"unexpected token {val!r}")
