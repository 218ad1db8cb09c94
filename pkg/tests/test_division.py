from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from reified import division
from reified.division import WeightedOrder, divide, leading_term
from reified.errors import ZeroPolynomial
from reified.values import Magnitude


def mag(x):
    return Magnitude.of(Fraction(x), 2)


def mpolys(nvars):
    idx = st.tuples(*[st.integers(0, 3)] * nvars)
    coef = st.fractions(min_value=-9, max_value=9, max_denominator=4)
    return st.dictionaries(idx, coef, max_size=5).map(division.mclean)


@st.composite
def instances(draw):
    nv = draw(st.integers(1, 3))
    radii = tuple(mag(draw(st.sampled_from([1, 2, 3, Fraction(1, 2), Fraction(3, 2)]))) for _ in range(nv))
    x = draw(mpolys(nv))
    G = draw(st.lists(mpolys(nv).filter(bool), min_size=1, max_size=3))
    return WeightedOrder(radii), x, G


@given(instances())
def test_division_identity_and_remainder(inst):
    order, x, G = inst
    res = divide(x, G, order)
    total = dict(res.remainder)
    for q, g in zip(res.quotients, G):
        total = division.madd(total, division.mmul(q, g))
    assert total == x
    # no remainder term is divisible by a leading index
    leads = [max(g, key=order.division_key) for g in G]
    for idx in res.remainder:
        assert not any(all(a >= b for a, b in zip(idx, li)) for li in leads)


def test_hand_example_below_one():
    half = mag(Fraction(1, 2))
    r = divide({(2, 1): 1}, [{(1, 1): 1, (0, 0): -1}], WeightedOrder((half, half)))
    assert r.quotients == [{(1, 0): 1}]
    assert r.remainder == {(1, 0): 1}


def test_hand_example_unit_radii():
    one = mag(1)
    r = divide({(1, 0): 1, (0, 1): 1}, [{(2, 0): 1}], WeightedOrder((one, one)))
    assert r.quotients == [{}]
    assert r.remainder == {(1, 0): 1, (0, 1): 1}


def test_weighted_leading_term():
    order = WeightedOrder((mag(Fraction(1, 2)), mag(2)))
    # weights: T1^3 -> 1/8, T2 -> 2, T1 T2 -> 1
    assert leading_term({(3, 0): 1, (0, 1): 5, (1, 1): 7}, order) == ((0, 1), 5)
    assert not order.is_well_order
    assert WeightedOrder((mag(1), mag(3))).is_well_order
    with pytest.raises(ZeroPolynomial):
        leading_term({}, order)
    with pytest.raises(ZeroPolynomial):
        divide({(0, 0): 1}, [{}], order)


def test_encode_round_trip():
    x = {(1, 2): Fraction(3, 4), (0, 0): Fraction(-1)}
    assert division.decode(division.encode(x)) == x
