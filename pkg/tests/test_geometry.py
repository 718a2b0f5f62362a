import pytest

from pfaffrig.geometry import (Basket, BasketMismatch, basket, canonical_type, classify_type_I, family_basket,
                               quasismooth_at_vertex, singular_points, wellformed_check)
from pfaffrig.pfaffian import compute_pfaffians, get_family, sample_member

from conftest import FAMILY_IDS

# expected baskets
BASKETS = {
    "deg42": {(2, 1): 1, (3, 1): 1, (5, 1): 1, (5, 2): 1, (7, 1): 1},
    "deg30": {(5, 1): 1, (5, 2): 2, (6, 1): 1},
    "deg20": {(2, 1): 1, (4, 1): 1, (5, 1): 2, (5, 2): 1},
    "deg12": {(3, 1): 2, (4, 1): 1, (5, 1): 1, (5, 2): 1},
    "deg4": {(2, 1): 3, (3, 1): 3, (4, 1): 1},
}


def test_canonical_type():
    assert canonical_type(5, (1, 2, 3)) == (5, 2)
    assert canonical_type(5, (2, 4, 1)) == (5, 2)
    assert canonical_type(5, (3, 4, 1)) == (5, 2)
    assert canonical_type(5, (2, 2, 3)) == (5, 1)
    assert canonical_type(7, (1, 6, 6)) == (7, 1)
    assert canonical_type(7, (1, 2, 2)) is None
    assert canonical_type(4, (2, 2, 1)) is None


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_wellformed(fid):
    assert wellformed_check(get_family(fid).space)


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_basket_seed_1(fid):
    assert family_basket(get_family(fid), 1) == Basket(BASKETS[fid])


def test_basket_mismatch_raises():
    spec = get_family("deg12")
    X = compute_pfaffians(sample_member(spec, 1, 10007))
    with pytest.raises(BasketMismatch):
        basket(X, expected={(3, 1): 1})


@pytest.mark.parametrize("fid", FAMILY_IDS)
def test_no_type_I_centres(fid):
    spec = get_family(fid)
    X = compute_pfaffians(sample_member(spec, 1, 10007))
    for pt in singular_points(X):
        assert classify_type_I(pt, spec.A3) == "NotTypeI"


def test_vertex_quasismooth():
    spec = get_family("deg42")
    X = compute_pfaffians(sample_member(spec, 1, 10007))
    # p_t is the 1/7 point
    assert quasismooth_at_vertex(X, spec.space.index("t"))


def test_basket_labels():
    assert Basket(BASKETS["deg4"]).labels() == ["3 x 1/2(1,1,1)", "3 x 1/3(1,1,2)", "1/4(1,1,3)"]
