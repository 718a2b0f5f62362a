import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pfaffrig.pfaffian import (PAIRS, SyzygyMatrix, compute_pfaffians, family_catalog, get_family, half_degrees,
                               pfaffian_degrees, pfaffian_deleting, sample_member, symbolic_matrix,
                               syzygy_identity_check)
from pfaffrig.wpoly import GradedPoly

from conftest import FAMILY_IDS

P = 10007

# expected Pfaffians of each family in terms of the named entries
DISPLAYED = {
    "deg42": ["a6*c10 - a7*b9 + a8*b8", "a6*c11 - a7*b10 + a9*b8", "a6*d12 - a8*b10 + a9*b9",
              "a7*d12 - a8*c11 + a9*c10", "b8*d12 - b9*c11 + b10*c10"],
    "deg30": ["a5*c9 - a6*b8 + a7*b7", "a5*c10 - a6*b9 + a8*b7", "a5*d11 - a7*b9 + a8*b8",
              "a6*d11 - a7*c10 + a8*c9", "b7*d11 - b8*c10 + b9*c9"],
    "deg20": ["a4*c8 - a5*b7 + a6*b6", "a4*c9 - a5*b8 + a7*b6", "a4*d10 - a6*b8 + a7*b7",
              "a5*d10 - a6*c9 + a7*c8", "b6*d10 - b7*c9 + b8*c8"],
    "deg12": ["a3*c7 - a4*b6 + a5*b5", "a3*c8 - a4*b7 + a6*b5", "a3*d9 - a5*b7 + a6*b6",
              "a4*d9 - a5*c8 + a6*c7", "b5*d9 - b6*c8 + b7*c7"],
    "deg4": ["a2*c5 - a3*b4p + a3p*b4", "a2*c6 - a3*b5 + a4*b4", "a2*d6 - a3p*b5 + a4*b4p",
             "a3*d6 - a3p*c6 + a4*c5", "b4*d6 - b4p*c6 + b5*c5"],
}


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_symbolic_pfaffians_match_display(fid):
    M = symbolic_matrix(get_family(fid))
    F = compute_pfaffians(M)
    from pfaffrig.wpoly import parse_and_grade
    assert F == [parse_and_grade(s, M.space) for s in DISPLAYED[fid]]


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_symbolic_syzygies(fid):
    M = symbolic_matrix(get_family(fid))
    assert syzygy_identity_check(M, compute_pfaffians(M))


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_pfaffian_degrees_sum(fid):
    spec = get_family(fid)
    assert sum(spec.pfaffian_degrees) == 2 * spec.sigma
    for f, d in zip(compute_pfaffians(sample_member(spec, 1, P)), spec.pfaffian_degrees):
        assert f.degree == d


def test_half_degrees_inconsistent():
    degs = dict(get_family("deg12").entry_degrees)
    degs[(4, 5)] += 1
    assert half_degrees(degs) is None
    with pytest.raises(ValueError):
        pfaffian_degrees(degs)


@pytest.mark.parametrize("fid", FAMILY_IDS)
@settings(max_examples=100)
@given(seed=st.integers(0, 2 ** 32 - 1))
def test_row_syzygies_random(fid, seed):
    spec = get_family(fid)
    M = sample_member(spec, seed, P)
    assert syzygy_identity_check(M, compute_pfaffians(M))


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_pfaffian_squared_is_minor_determinant(fid):
    # independent oracle: Pf(A)^2 = det(A) for the 4x4 skew blocks, at random points mod p
    spec = get_family(fid)
    M = sample_member(spec, 7, P)
    rng = random.Random(fid)
    for _ in range(3):
        pt = [rng.randrange(P) for _ in range(spec.space.n)]
        val = {k: v.evaluate(pt) % P for k, v in M.entries.items()}
        A = sympy.zeros(5, 5)
        for (i, j), v in val.items():
            A[i - 1, j - 1] = v
            A[j - 1, i - 1] = -v
        for k in range(1, 6):
            keep = [t - 1 for t in range(1, 6) if t != k]
            det = A.extract(keep, keep).det() % P
            pf = pfaffian_deleting(M, k).evaluate(pt) % P
            assert pf * pf % P == det


def test_member_is_reproducible():
    spec = get_family("deg20")
    assert sample_member(spec, 3, P) == sample_member(spec, 3, P)
    assert sample_member(spec, 3, P) != sample_member(spec, 4, P)


def test_pinned_coefficient():
    spec = get_family("deg42")
    y = tuple(1 if i == 1 else 0 for i in range(7))
    M = sample_member(spec, 1, P, pinned={((1, 2), (1, 0, 0, 0, 0, 0, 0)): 0})
    assert M.entries[(1, 2)].coefficient((1, 0, 0, 0, 0, 0, 0)) == 0
    assert sample_member(spec, 1, P).entries[(1, 2)].coefficient(y) == M.entries[(1, 2)].coefficient(y)


def test_inhomogeneous_entry_rejected():
    spec = get_family("deg12")
    M = sample_member(spec, 1, P)
    ent = dict(M.entries)
    ent[(1, 2)] = ent[(1, 2)] + GradedPoly.var(spec.space, 0, P)
    with pytest.raises(ValueError):
        SyzygyMatrix(spec.space, ent, spec.entry_degrees, P)


def test_catalog_shape():
    assert [s.id for s in family_catalog()] == ["deg42", "deg30", "deg20", "deg12", "deg4"]
    assert get_family("1/12") is get_family("deg12")
    with pytest.raises(KeyError):
        get_family("deg7")
    assert len(PAIRS) == 10


def test_rigidity_and_type_II1_metadata():
    rigid = {s.id: s.rigid for s in family_catalog()}
    assert rigid == {"deg42": True, "deg30": True, "deg20": True, "deg12": False, "deg4": False}
    assert get_family("deg12").type_II1 == (5, 2)
    assert get_family("deg4").type_II1 == (4, 1)
    assert get_family("deg42").type_II1 is None
