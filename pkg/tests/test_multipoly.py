import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from formality.exact import root_power
from formality.lie_a import elementary_symmetric
from formality.multipoly import (
    Polynomial,
    VariableMismatch,
    VariableSet,
    evaluate,
    format_poly,
    homogeneous_component,
    linear_substitute,
    monomials_of_degree,
    parse_poly,
    poly_arith,
)

XY = VariableSet(["x", "y"])
S2 = VariableSet(["s1", "s2"])


def P(text, vars=XY):
    return parse_poly(text, vars)


def test_poly_arith_examples():
    assert poly_arith(P("x + y"), P("x - y"), "mul") == P("x^2 - y^2")
    p = P("3*x*y - 1/2*y^2")
    assert poly_arith(p, Polynomial.zero(XY), "add") == p
    assert (P("x + y") ** 2 - P("x^2 + 2*x*y + y^2")).is_zero()


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        poly_arith(P("x"), P("s1", S2), "add")


def test_linear_substitute_examples():
    s = VariableSet(["s"])
    p = P("x*y")
    img = {"x": P("s", s), "y": P("-s", s)}
    assert linear_substitute(p, img, s) == P("-s^2", s)

    X = VariableSet.standard("x", 4)
    images = [P("s1", S2), P("-s1", S2), P("s2", S2), P("-s2", S2)]
    assert linear_substitute(elementary_symmetric(4, 2, X), images, S2) == P("-s1^2 - s2^2", S2)
    assert linear_substitute(elementary_symmetric(4, 3, X), images, S2).is_zero()


def test_linear_substitute_errors():
    s = VariableSet(["s"])
    with pytest.raises(KeyError):
        linear_substitute(P("x*y"), {"x": P("s", s)}, s)
    with pytest.raises(ValueError):
        linear_substitute(P("x*y"), {"x": P("s^2", s), "y": P("s", s)}, s)


def test_evaluate_examples():
    i = root_power(4, 1)
    point = [root_power(4, 0), i, -root_power(4, 0), -i]
    assert evaluate(elementary_symmetric(4, 2), point).is_zero()
    assert evaluate(elementary_symmetric(4, 4), point) == -1
    const = Polynomial.constant(XY, Fraction(7, 3))
    assert evaluate(const, [root_power(5, 1), root_power(5, 2)]) == Fraction(7, 3)
    assert evaluate(const, [Fraction(1), Fraction(2)]) == Fraction(7, 3)


def test_evaluate_rejects_mixed_orders():
    with pytest.raises(ValueError):
        evaluate(P("x*y"), [root_power(4, 1), root_power(6, 1)])


def test_monomials_of_degree_examples():
    assert monomials_of_degree(XY, 2) == [(2, 0), (1, 1), (0, 2)]
    w = VariableSet(["a2", "a3"], [2, 3])
    assert monomials_of_degree(w, 6) == [(3, 0), (0, 2)]
    assert monomials_of_degree(w, 0) == [(0, 0)]
    assert monomials_of_degree(w, 1) == []


def series_coefficient(weights, d):
    """Coefficient of t^d in prod 1/(1 - t^w), by truncated power-series multiplication."""
    coeffs = [1] + [0] * d
    for w in weights:
        for i in range(w, d + 1):
            coeffs[i] += coeffs[i - w]
    return coeffs[d]


def brute_force_monomials(weights, d):
    ranges = [range(d // w + 1) for w in weights]
    return {e for e in itertools.product(*ranges) if sum(a * w for a, w in zip(e, weights)) == d}


@pytest.mark.parametrize("weights", [(1,), (1, 1, 1), (2, 3), (2, 3, 2, 3), (1, 2, 3, 4), (2, 2, 5)])
def test_monomial_counts(weights):
    vars = VariableSet([f"v{i}" for i in range(len(weights))], weights)
    for d in range(13):
        monos = monomials_of_degree(vars, d)
        assert len(monos) == series_coefficient(weights, d)
        assert set(monos) == brute_force_monomials(weights, d)
        assert monos == sorted(monos, reverse=True)


def test_homogeneous_component_examples():
    p = P("x^2 + x")
    assert homogeneous_component(p, 2) == P("x^2")
    assert homogeneous_component(p, 3).is_zero()
    q = P("x^2 - 3*x*y")
    assert homogeneous_component(q, 2) == q
    assert sum((homogeneous_component(p, d) for d in range(4)), Polynomial.zero(XY)) == p


def random_homogeneous(rng, vars, d, terms=5):
    monos = monomials_of_degree(vars, d)
    return Polynomial(vars, {rng.choice(monos): Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(terms)})


def test_substitution_preserves_homogeneity():
    rng = random.Random(3)
    src = VariableSet.standard("x", 4)
    tgt = VariableSet.standard("s", 3)
    for _ in range(100):
        d = rng.randint(0, 5)
        p = random_homogeneous(rng, src, d)
        images = [
            Polynomial(tgt, {tgt.unit(j): Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for j in range(3)})
            for _ in range(4)
        ]
        img = linear_substitute(p, images, tgt)
        assert img.is_zero() or img.degrees() == {d}


def test_evaluate_is_multiplicative():
    rng = random.Random(11)
    vars = VariableSet.standard("x", 3)
    for _ in range(50):
        a = random_homogeneous(rng, vars, rng.randint(0, 3))
        b = random_homogeneous(rng, vars, rng.randint(0, 3))
        n = rng.choice([3, 5, 8])
        point = [root_power(n, rng.randrange(n)) * rng.randint(-2, 2) for _ in range(3)]
        assert evaluate(a * b, point) == evaluate(a, point) * evaluate(b, point)
        qpoint = [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(3)]
        assert evaluate(a * b, qpoint) == evaluate(a, qpoint) * evaluate(b, qpoint)


def test_canonical_format():
    assert format_poly(P("-s1^2 - s2^2", S2)) == "-s1^2 - s2^2"
    assert format_poly(P("y + x^2 - 1/2", XY)) == "x^2 + y - 1/2"
    assert format_poly(Polynomial.zero(XY)) == "0"
    assert format_poly(P("(x + y)^2")) == "x^2 + 2*x*y + y^2"


W = VariableSet(["a2", "a3", "b2"], [2, 3, 2])


@st.composite
def polynomials(draw):
    terms = draw(
        st.dictionaries(
            st.tuples(*(st.integers(0, 3) for _ in range(3))),
            st.fractions(min_value=-20, max_value=20, max_denominator=9),
            max_size=6,
        )
    )
    return Polynomial(W, terms)


@settings(max_examples=200, deadline=None)
@given(polynomials())
def test_parse_print_round_trip(p):
    text = format_poly(p)
    assert parse_poly(text, W) == p
    assert format_poly(parse_poly(text, W)) == text


def test_parse_errors():
    for bad in ("x +", "z", "x^y", "2 x", "x^1/2"):
        with pytest.raises(ValueError):
            parse_poly(bad, XY)
