import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIELDS, field_seeds, sample_point, sample_poly
from reified.disc import (
    BaseField,
    GaussPoint,
    Graded,
    MonomialPoint,
    Rank2Point,
    Side,
    Type1Point,
    classify,
    gauss_norm,
    graded_membership,
    graded_valuation_ring_test,
    intersect,
    laurent_piece,
    member,
    point_from_json,
    random_center,
    random_radius,
    type4_point,
    unit_ideal_check,
    upper_branch_point,
    weierstrass,
)
from reified.errors import PreconditionViolated, Type4Unsupported, Unclassifiable
from reified.poly import Poly
from reified.values import ZERO, Magnitude, Value, padic_valuation, value_max

K2 = BaseField.padic(2)
T = Poly.T()


def padic_abs(x, p):
    x = Fraction(x)
    return None if x == 0 else Magnitude.ppow(-padic_valuation(x, p), p)


@st.composite
def factored(draw, p=2):
    """A polynomial ``c * prod (T - a_i)`` with its factors."""
    c = draw(st.sampled_from([1, 2, 3, Fraction(1, 2), 6, Fraction(5, 4)]))
    roots = draw(st.lists(st.sampled_from([0, 1, 2, 4, Fraction(1, 2), 3, 6, -2, Fraction(3, 4)]),
                          max_size=4))
    P = Poly.const(c)
    for a in roots:
        P = P * Poly.linear(a)
    return P, c, roots


def product_formula(K, c, roots, z, radius: Value) -> Value:
    """``|c| prod max(radius, |z - a|)``: the value of a disc point on a split polynomial."""
    out = K.value(c)
    for a in roots:
        out = out * value_max([radius, K.value(Fraction(z) - a)])
    return out


@given(factored(), st.integers(0, 10**6))
def test_gauss_and_rank2_points_match_product_formula(data, seed):
    P, c, roots = data
    rng = random.Random(seed)
    z, rho = random_center(K2, rng), random_radius(K2, rng)
    assert GaussPoint(K2, z, rho)(P) == product_formula(K2, c, roots, z, Value.real(rho))
    for side, inf in ((Side.BELOW, 1), (Side.ABOVE, -1)):
        x = Rank2Point(K2, z, rho, side)
        assert x(P) == product_formula(K2, c, roots, z, Value(0, rho, inf))


@given(field_seeds())
def test_type1_is_absolute_value_of_evaluation(fs):
    K, seed = fs
    rng = random.Random(seed)
    z = random_center(K, rng)
    P = sample_poly(K, seed)
    got = Type1Point(K, z)(P)
    if K.mode == "trivial":
        assert got == (ZERO if P(z) == 0 else Value.real(K.one()))
    else:
        want = padic_abs(P(z), K.p)
        assert got == (ZERO if want is None else Value.real(want))


@given(field_seeds())
def test_points_are_bounded_by_gauss_norm(fs):
    K, seed = fs
    x = sample_point(K, seed)
    P = sample_poly(K, seed + 1)
    g = gauss_norm(K, P)
    val = x(P)
    if g is None:
        assert val.is_zero
    elif not val.is_zero and val.lead == 0:
        assert val.real_part() <= g
    else:
        assert val.lead <= 0


@given(field_seeds())
def test_point_json_round_trip(fs):
    K, seed = fs
    x = sample_point(K, seed)
    y = point_from_json(K, x.to_json())
    P = sample_poly(K, seed + 7)
    assert x(P) == y(P)


def test_base_field_json_round_trip():
    for K in FIELDS:
        assert BaseField.from_json(K.to_json()) == K


def test_classification():
    assert classify(Type1Point(K2, 0)) == 1
    assert classify(GaussPoint(K2, 0, Magnitude.ppow(Fraction(-1, 3), 2))) == 2
    assert classify(GaussPoint(K2, 0, Magnitude.of(Fraction(1, 3), 2))) == 3
    assert classify(upper_branch_point(K2)) == 5
    assert classify(Rank2Point(K2, 0, Magnitude.of(Fraction(1, 3), 2), Side.BELOW)) == 6
    KZ = BaseField.padic(2, "Z")
    assert classify(GaussPoint(KZ, 0, Magnitude.ppow(Fraction(-1, 3), 2))) == 3
    with pytest.raises(Unclassifiable):
        classify(MonomialPoint(K2, Value(-1, K2.one(), 0)))
    with pytest.raises(Type4Unsupported):
        type4_point()


def test_preconditions():
    with pytest.raises(PreconditionViolated):
        Type1Point(K2, Fraction(1, 2))
    with pytest.raises(PreconditionViolated):
        GaussPoint(K2, 0, Magnitude.of(2, 2))
    with pytest.raises(PreconditionViolated):
        GaussPoint(K2, 0, Magnitude.of(Fraction(1, 3), 3))


def test_upper_branch_point_escapes_the_closed_disc():
    up = upper_branch_point(K2)
    assert Value.real(K2.one()) < up(T)
    assert up(T - 1) == up(T)
    assert not member(up, weierstrass(K2, T, K2.one()))
    assert member(GaussPoint(K2, 0, K2.one()), weierstrass(K2, T, K2.one()))


def test_unit_ideal_check():
    assert unit_ideal_check(K2, [T, T - 1])
    assert not unit_ideal_check(K2, [T * (T - 2)])
    assert unit_ideal_check(K2, [Poly.linear(Fraction(1, 2))])
    assert not unit_ideal_check(BaseField.trivial(), [Poly.linear(Fraction(1, 2))])
    assert unit_ideal_check(BaseField.trivial(), [T, T - 1])
    with pytest.raises(PreconditionViolated):
        unit_ideal_check(K2, [Poly()])


@given(st.integers(0, 10**6))
def test_membership_of_classical_points(seed):
    rng = random.Random(seed)
    z = random_center(K2, rng)
    q = Magnitude.ppow(-rng.randint(0, 3), 2)
    x = Type1Point(K2, z)
    absz = padic_abs(z, 2)
    assert member(x, weierstrass(K2, T, q)) == (absz is None or absz <= q)
    assert member(x, laurent_piece(K2, T, q)) == (absz is not None and absz >= q)


@given(field_seeds())
def test_intersection_is_conjunction(fs):
    K, seed = fs
    half = Magnitude.of(Fraction(1, 2), K.p) if K.mode == "padic" else K.one()
    U = weierstrass(K, T, half)
    V = weierstrass(K, T - 1, K.one())
    W = intersect(U, V)
    x = sample_point(K, seed)
    assert member(x, W) == (member(x, U) and member(x, V))


def test_graded_membership():
    half = Magnitude.of(Fraction(1, 2), 2)
    assert graded_membership(K2, 2 * T, half) is Graded.IN_PLUS
    assert graded_membership(K2, 2 * T, half, mode="base_only") is Graded.IN_CIRC_ONLY
    assert graded_membership(K2, Poly.const(3), K2.one(), mode="base_only") is Graded.IN_PLUS
    assert graded_membership(K2, T, half) is Graded.OUT
    with pytest.raises(ValueError):
        graded_membership(K2, T, K2.one(), mode="other")


def test_graded_valuation_ring():
    half = Magnitude.of(Fraction(1, 2), 2)
    assert graded_valuation_ring_test(Type1Point(K2, 0), 2 * T, half)
    assert graded_valuation_ring_test(GaussPoint(K2, 0, K2.one()), 2 * T, half)
    assert not graded_valuation_ring_test(upper_branch_point(K2), 2 * T, half)
    with pytest.raises(PreconditionViolated):
        graded_valuation_ring_test(Type1Point(K2, 0), T, half)
