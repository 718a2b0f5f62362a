from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pfaffrig.hilbert import (HilbertData, anticanonical_degree, asymptotic_ratio, divide_by_one_minus_t, hilbert_numerator,
                              series_expand)
from pfaffrig.ideal import buchberger
from pfaffrig.pfaffian import compute_pfaffians, get_family, sample_member
from pfaffrig.wpoly import GradedPoly

from conftest import FAMILY_IDS

# expected anticanonical degrees
DEGREES = {"deg42": Fraction(1, 42), "deg30": Fraction(1, 30), "deg20": Fraction(1, 20),
           "deg12": Fraction(1, 12), "deg4": Fraction(1, 4)}


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_degree(fid):
    assert anticanonical_degree(hilbert_numerator(get_family(fid))) == DEGREES[fid]


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_numerator_shape(fid):
    h = hilbert_numerator(get_family(fid))
    assert h.is_antipalindromic()
    assert sum(h.numerator) == 0
    assert h.vanishing_order_at_one() == 3
    assert min(series_expand(h, 60)) >= 0


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_series_against_standard_monomials(fid):
    # independent oracle: x, y is a regular sequence, so the curve section x = y = 0
    # has series N(t) / prod over the other weights; count its standard monomials
    spec = get_family(fid)
    sp = spec.space
    X = compute_pfaffians(sample_member(spec, 1, 10007))
    gb = buchberger(X + [GradedPoly.var(sp, 0, 10007), GradedPoly.var(sp, 1, 10007)])
    lms = gb.leading_monomials
    n = 40
    counts = []
    for d in range(n + 1):
        counts.append(sum(1 for e in sp.monomials(d)
                          if not any(all(a <= b for a, b in zip(m, e)) for m in lms)))
    h = hilbert_numerator(spec)
    cut = HilbertData(h.numerator, sp.weights[2:], h.sigma)
    assert counts == series_expand(cut, n)


def test_asymptotics_approach_one():
    h = hilbert_numerator(get_family("deg4"))
    assert abs(float(asymptotic_ratio(h, 600)) - 1) < 0.05


def test_divide_rejects_nonvanishing():
    with pytest.raises(ValueError):
        divide_by_one_minus_t([1, 1])
    assert divide_by_one_minus_t([1, -1]) == [1]


@given(st.lists(st.integers(1, 12), min_size=7, max_size=7), st.data())
def test_numerator_antipalindromic_for_any_format(weights, data):
    sigma = sum(weights) - 1
    degs = data.draw(st.lists(st.integers(1, max(1, sigma - 1)), min_size=5, max_size=5))
    h = hilbert_numerator(degs, weights)
    assert h.is_antipalindromic()
    assert sum(h.numerator) == 0


def test_malformed_format_rejected():
    # vanishing order too low at t = 1 for a 3-fold
    h = hilbert_numerator([2, 3, 4, 5, 6], [1, 1, 1, 1, 1, 1, 1])
    with pytest.raises(ValueError):
        anticanonical_degree(h)
