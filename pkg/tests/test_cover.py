import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import field_seeds, sample_point
from reified import cover
from reified.disc import (
    BaseField,
    GaussPoint,
    laurent_piece,
    member,
    random_point,
    weierstrass,
    whole_space,
)
from reified.errors import NotACoverOnWitnesses, NotAUnit, PreconditionViolated, UnitIdealFailure
from reified.poly import Poly
from reified.values import Magnitude, value_max

K2 = BaseField.padic(2)
T = Poly.T()
ONE = K2.one()
HALF = Magnitude.of(Fraction(1, 2), 2)


def covered_witnesses(K, pieces, n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        x = random_point(K, rng)
        if any(member(x, U) for U in pieces):
            out.append(x)
    return out


@given(field_seeds())
def test_standard_pieces_agree_with_membership(fs):
    K, seed = fs
    cov = cover.StandardRationalCovering(K, [T, T - 1, Poly.const(1)], [K.one()] * 3)
    x = sample_point(K, seed)
    hits = cov.pieces_containing(x)
    assert hits
    assert hits == [i for i in range(3) if member(x, cov.piece(i))]


def test_standard_covering_needs_unit_ideal():
    with pytest.raises(UnitIdealFailure):
        cover.StandardRationalCovering(K2, [T, T * (T - 1)], [ONE, ONE])


@pytest.mark.parametrize("pieces", [
    [weierstrass(K2, T, HALF), laurent_piece(K2, T, HALF)],
    [weierstrass(K2, T, ONE), weierstrass(K2, T - 1, ONE)],
    [weierstrass(K2, T, HALF), weierstrass(K2, T - 1, HALF), laurent_piece(K2, T * (T - 1), HALF)],
])
def test_refinement_pieces_sit_inside_inputs(pieces):
    W = covered_witnesses(K2, pieces, 60, 1)
    ref = cover.refine_to_standard_rational(K2, pieces, W)
    assert ref.checked == 60
    for x in W:
        for k in ref.covering.pieces_containing(x):
            assert all(member(x, pieces[i]) for i in ref.pieces[k].contained_in)


def test_refinement_rejects_uncovered_witness():
    pieces = [weierstrass(K2, T, HALF)]
    with pytest.raises(NotACoverOnWitnesses):
        cover.refine_to_standard_rational(K2, pieces, [GaussPoint(K2, 0, ONE)])


def test_rational_roots():
    f = (T - 1) ** 2 * (T - Fraction(1, 2)) * 3
    assert sorted(cover.rational_roots(f)) == [(Fraction(1, 2), 1), (Fraction(1), 2)]
    with pytest.raises(PreconditionViolated):
        cover.rational_roots(T * T + 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_laurent_constant_of_two_nearby_roots(p):
    K = BaseField.padic(p)
    lc = cover.laurent_constant(K, [T, T - p], [K.one(), K.one()])
    assert lc.value == Magnitude.ppow(-1, p)
    assert lc.argmin(T).real_part() == lc.value


def test_laurent_constant_small_cases():
    assert cover.laurent_constant(K2, [Poly.const(1)], [ONE]).value == ONE
    # |T - 1/2| = 2 on the whole disc
    assert cover.laurent_constant(K2, [Poly.linear(Fraction(1, 2))], [ONE]).value == Magnitude.ppow(1, 2)
    with pytest.raises(PreconditionViolated):
        cover.laurent_constant(K2, [T], [ONE])
    with pytest.raises(PreconditionViolated):
        cover.laurent_constant(K2, [T, T - 1], [ONE, Magnitude.of(Fraction(1, 3), 2)])


@given(st.lists(st.sampled_from([0, 1, 2, 4, 8, -2, 3, 6]), min_size=2, max_size=3, unique=True),
       st.lists(st.integers(-2, 1), min_size=3, max_size=3), st.integers(0, 10**6))
def test_laurent_constant_is_a_lower_bound(roots, exps, seed):
    fs = [Poly.linear(a) for a in roots]
    qs = [Magnitude.ppow(e, 2) for e in exps[:len(fs)]]
    lc = cover.laurent_constant(K2, fs, qs, guard_samples=0)
    rng = random.Random(seed)
    for _ in range(40):
        x = random_point(K2, rng, kinds=("type1", "gauss"))
        m = value_max([x(f) * q for f, q in zip(fs, qs)]).real_part()
        assert not m < lc.value


@given(field_seeds())
def test_laurent_refinement_on_witnesses(fs):
    K, seed = fs
    if K.mode == "trivial":
        return
    cov = cover.StandardRationalCovering(K, [T, T - K.p], [K.one(), K.one()])
    ref = cover.laurent_refinement(cov)
    rng = random.Random(seed)
    W = [random_point(K, rng) for _ in range(20)]
    assert cover.check_laurent_refinement(cov, ref, W) == 20
    for piece in ref.pieces:
        sub = cover.restricted_covering(cov, piece)
        assert (sub is None) == piece.empty


def test_units_to_laurent():
    cov = cover.StandardRationalCovering(K2, [Poly.const(1), Poly.const(3), Poly.linear(Fraction(1, 2))],
                                         [ONE, HALF, ONE])
    W = covered_witnesses(K2, [whole_space(K2)], 50, 2)
    res = cover.units_to_laurent(cov, W)
    assert len(res.pairs) == 3
    assert len(res.kings) == 8
    with pytest.raises(NotAUnit) as info:
        cover.units_to_laurent(cover.StandardRationalCovering(K2, [Poly.const(1), T], [ONE, ONE]))
    assert info.value.index == 1
