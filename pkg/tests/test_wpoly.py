from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pfaffrig.wpoly import FractionalWeight, GradedPoly, GradingError, ParseError, WeightSystem, parse_and_grade

P = 10007
SP = WeightSystem([1, 2, 3], "x y z".split())


def test_weight_system_validation():
    with pytest.raises(ValueError):
        WeightSystem([1, 0, 2])
    with pytest.raises(ValueError):
        WeightSystem([1, 2], ["x", "x"])
    assert SP.index("z") == 2
    assert sorted(SP.monomials(3)) == sorted([(3, 0, 0), (1, 1, 0), (0, 0, 1)])


def test_monomial_count_matches_series():
    # number of monomials of degree d in P(1,2,3) is the coefficient of 1/((1-t)(1-t^2)(1-t^3))
    coeffs = [0] * 13
    coeffs[0] = 1
    for a in (1, 2, 3):
        for k in range(a, 13):
            coeffs[k] += coeffs[k - a]
    assert [len(SP.monomials(d)) for d in range(13)] == coeffs


def test_parse_grade_and_print_roundtrip():
    f = parse_and_grade("3*x^4 + x^2*y - 5*y^2 + x*z", SP, P)
    assert f.degree == 4
    assert parse_and_grade(str(f), SP, P) == f


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_and_grade("x + + ", SP, P)
    with pytest.raises((ParseError, KeyError)):
        parse_and_grade("x*w", SP, P)


def test_inhomogeneous_has_no_degree():
    f = parse_and_grade("x + y", SP)
    assert not f.is_homogeneous()
    assert f.degree is None


def test_zero_is_homogeneous():
    z = GradedPoly.zero(SP)
    assert z.is_homogeneous()
    assert z.is_zero()


def test_rational_arithmetic():
    f = parse_and_grade("x^2/2 + y/3", SP)
    g = f * f - f.scale(Fraction(1, 2))
    assert g.coefficient((4, 0, 0)) == Fraction(1, 4)
    assert g.coefficient((2, 0, 0)) == Fraction(-1, 4)


def test_substitute_and_restrict():
    f = parse_and_grade("x^3 + x*y + z", SP, P)
    g = f.substitute({2: GradedPoly.var(SP, 2, P) - parse_and_grade("x*y", SP, P)})
    assert g == parse_and_grade("x^3 + z", SP, P)
    assert f.restrict_zero([0]) == parse_and_grade("z", SP, P)


def test_dehomogenize_then_homogenize():
    f = parse_and_grade("x^6 + x^2*y^2 + z^2 + x*y*z", SP, P)
    assert f.dehomogenize(0).homogenize(0, 6) == f


def test_fractional_weight_parts():
    f = parse_and_grade("x*z + y^2 + x^4", SP, P)
    w = FractionalWeight([1, 1, 2], 3)
    low, wt = f.lowest_weight_part(w)
    assert low == parse_and_grade("y^2", SP, P)
    assert wt == Fraction(2, 3)
    parts = f.weight_parts(w)
    assert sum(len(v.terms) for v in parts.values()) == 3


def test_grading_error_on_mixed_spaces():
    other = WeightSystem([1, 1, 1], "x y z".split())
    with pytest.raises((GradingError, ValueError)):
        GradedPoly.var(SP, 0, P) + GradedPoly.var(other, 0, P)


coeff = st.integers(-20, 20)


@st.composite
def polys(draw, d):
    monos = SP.monomials(d)
    cs = draw(st.lists(coeff, min_size=len(monos), max_size=len(monos)))
    return GradedPoly(SP, {m: c for m, c in zip(monos, cs) if c}, P)


@given(polys(4), polys(4), polys(3))
def test_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * h == h * f
    assert (f - f).is_zero()
    if not (f * h).is_zero():
        assert (f * h).degree == 7


@given(polys(5), st.lists(st.integers(0, P - 1), min_size=3, max_size=3))
def test_euler_identity(f, pt):
    # sum a_i x_i df/dx_i = deg(f) f
    lhs = GradedPoly.zero(SP, P)
    for i, a in enumerate(SP.weights):
        lhs = lhs + (GradedPoly.var(SP, i, P) * f.differentiate(i)).scale(a)
    assert lhs == f.scale(5)
