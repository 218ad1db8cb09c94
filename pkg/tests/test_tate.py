import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIELDS
from reified import tate
from reified.disc import BaseField
from reified.errors import IncompatiblePair, NoConvergence
from reified.values import Magnitude

K2 = BaseField.padic(2)


def mag(x):
    return Magnitude.of(Fraction(x), 2)


coeffs = st.fractions(min_value=-30, max_value=30, max_denominator=8)
terms2 = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeffs, max_size=5)
radii2 = st.tuples(st.sampled_from([1, Fraction(1, 2), Fraction(1, 3), Fraction(3, 4)]),
                   st.sampled_from([1, Fraction(1, 4), Fraction(2, 3)]))


@given(st.sampled_from(FIELDS[:2]), radii2, terms2, terms2)
def test_weighted_gauss_norm_is_multiplicative(K, radii, a, b):
    rs = [Magnitude.of(r, K.p) for r in radii]
    x = tate.WeightedTateSeries(K, rs, a)
    y = tate.WeightedTateSeries(K, rs, b)
    nx, ny, nxy = x.stored_norm(), y.stored_norm(), (x * y).stored_norm()
    if nx is None or ny is None:
        assert nxy is None
    else:
        assert nxy == nx * ny


def test_norm_certification_and_json():
    s = tate.WeightedTateSeries(K2, [mag(Fraction(1, 2))], {(0,): 1, (2,): 4}, err=mag(Fraction(1, 8)))
    rep = tate.gauss_norm(s)
    assert rep.norm == mag(1) and rep.certified
    loose = tate.WeightedTateSeries(K2, [mag(1)], {(1,): 2}, err=mag(1))
    assert not tate.gauss_norm(loose).certified
    back = tate.WeightedTateSeries.from_json(K2, s.to_json())
    assert back.terms == s.terms and back.err == s.err
    with pytest.raises(ValueError):
        s * loose
    same = tate.WeightedTateSeries(K2, [mag(Fraction(1, 2))], {(1,): 2}, err=mag(Fraction(1, 16)))
    prod = s * same
    # the tail bound is max(|s| err', |s'| err, err err')
    assert prod.err == mag(Fraction(1, 16))
    with pytest.raises(ValueError):
        tate.WeightedTateSeries(K2, [mag(1)], {(-1,): 1})


@given(st.integers(0, 10**6), st.sampled_from([1, Fraction(1, 2), Fraction(1, 4)]))
def test_laurent_split(seed, qv):
    q = mag(qv)
    b = tate.random_laurent(K2, random.Random(seed))
    sp = tate.laurent_split(b)
    assert sp.residual == {}
    assert tate.laurent_add(sp.b1, sp.b2_in_T(), -1) == tate.normal_form(b)
    assert all(n >= 0 for n in sp.b1) and all(n >= 1 for n in sp.b2)
    nb = tate.bivariate_norm(K2, q, b)
    for part in (tate.circle_norm(K2, q, sp.b1), tate.annulus_norm(K2, q, sp.b2_in_T())):
        assert part is None or nb is None or not nb < part


def test_norms_on_the_covering():
    q = mag(Fraction(1, 2))
    a = {0: Fraction(3), 2: Fraction(4)}
    assert tate.disc_norm(K2, a) == mag(1)
    assert tate.circle_norm(K2, q, a) == mag(1)
    assert tate.annulus_norm(K2, q, {-1: Fraction(1)}) == mag(2)
    with pytest.raises(ValueError):
        tate.disc_norm(K2, {-1: Fraction(1)})


def test_glue_sections():
    q = mag(Fraction(1, 2))
    a = {0: Fraction(1), 3: Fraction(2, 3)}
    assert tate.glue_sections(q, a, dict(a)) == a
    with pytest.raises(IncompatiblePair) as info:
        tate.glue_sections(q, {0: Fraction(1)}, {-1: Fraction(1)})
    assert info.value.witness == {-1: Fraction(-1), 0: Fraction(1)}
    with pytest.raises(ValueError):
        tate.glue_sections(q, {-1: Fraction(1)}, {})


@pytest.mark.parametrize("qv", [1, Fraction(1, 2), Fraction(1, 4)])
def test_cech_check(qv):
    rep = tate.cech_check(K2, mag(qv), samples=30, seed=1)
    assert rep.recovered == 30 and rep.split_residual_terms == 0
    assert rep.norm_checks == 60


def test_glue_one_by_one():
    M = [[{0: Fraction(1), 1: Fraction(2), -1: Fraction(2)}]]
    tol = Magnitude.ppow(-20, 2)
    res = tate.glue_free_module(K2, mag(1), M, tol)
    assert res.iterations == 5
    assert res.residual == Magnitude.ppow(-32, 2)
    assert res.norms[0] == mag(Fraction(1, 2))
    assert all(n >= 0 for row in res.M1 for a in row for n in a)
    assert all(n <= 0 for row in res.M2 for a in row for n in a)


def test_glue_identity_and_divergent_input():
    tol = Magnitude.ppow(-20, 2)
    res = tate.glue_free_module(K2, mag(1), tate.identity(2), tol)
    assert res.iterations == 0 and res.residual is None
    with pytest.raises(NoConvergence):
        tate.glue_free_module(K2, mag(1), [[{0: Fraction(2)}]], tol)


def test_round_padic():
    c = Fraction(5, 3)
    r = tate._round_padic(c, 2, 10)
    assert r.denominator == 1 and abs(r) <= 2 ** 9
    assert (c - r).numerator % 2 ** 10 == 0
    assert tate._round_padic(Fraction(2 ** 12), 2, 10) == 0
