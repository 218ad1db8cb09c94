import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reified import witt
from reified.errors import NotCompatible, NotDivisible, PrecisionMismatch, Unstable
from reified.witt import PerfectElement, WittVector, teichmuller, witt_of_integer


@st.composite
def witt_triples(draw, max_len=3):
    p = draw(st.sampled_from([2, 3]))
    N = draw(st.integers(1, max_len))
    rng = random.Random(draw(st.integers(0, 10**9)))
    return tuple(witt.random_witt(p, N, rng) for _ in range(3))


def t(p, e=1, c=1):
    return PerfectElement.monomial(p, Fraction(e), c)


def test_perfect_element_arithmetic():
    x = PerfectElement(2, {Fraction(1, 2): 1, 1: 1})
    assert x * x == PerfectElement(2, {1: 1, 2: 1})
    assert x.frobenius(1) == x ** 2
    assert x.frobenius(-1).frobenius(1) == x
    assert x.norm() == witt.Magnitude.ppow(Fraction(-1, 2), 2)
    assert x.divide_monomial(t(2, Fraction(1, 2))) == PerfectElement(2, {0: 1, Fraction(1, 2): 1})
    assert x.divide_monomial(t(2, 1)) is None
    with pytest.raises(ValueError):
        PerfectElement(2, {Fraction(1, 3): 1})
    assert PerfectElement.from_json(2, x.to_json()) == x


@given(witt_triples())
def test_ring_axioms(abc):
    a, b, c = abc
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()
    assert a * witt_of_integer(1, a.p, a.N) == a


@given(witt_triples())
def test_structure_polynomials_match_ghost_oracle(abc):
    a, b, _ = abc
    assert a + b == witt.ghost_add(a, b)
    assert a * b == witt.ghost_mul(a, b)


@given(st.sampled_from([2, 3]), st.integers(-12, 12), st.integers(-12, 12))
def test_integers_embed(p, m, n):
    N = 3
    assert witt_of_integer(m, p, N) + witt_of_integer(n, p, N) == witt_of_integer(m + n, p, N)
    assert witt_of_integer(m, p, N) * witt_of_integer(n, p, N) == witt_of_integer(m * n, p, N)


@given(witt_triples())
def test_teichmuller_is_multiplicative_and_p_is_vf(abc):
    a, b, _ = abc
    p, N = a.p, a.N
    x, y = a.coords[0], b.coords[0]
    assert teichmuller(x, N) * teichmuller(y, N) == teichmuller(x * y, N)
    assert witt.witt_p(p, N) * a == a.frobenius(1).verschiebung()
    assert witt.from_digits(p, a.digits()) == a


def test_mismatched_shapes():
    a = witt_of_integer(1, 2, 2)
    with pytest.raises(PrecisionMismatch):
        a + witt_of_integer(1, 2, 3)
    with pytest.raises(PrecisionMismatch):
        a + witt_of_integer(1, 3, 2)
    with pytest.raises(ValueError):
        WittVector(2, ())


def test_json_round_trip():
    a = witt.random_witt(3, 3, random.Random(5))
    assert WittVector.from_json(a.to_json()) == a


@pytest.mark.parametrize("p", [2, 3])
def test_standard_primitive(p):
    z = witt.standard_primitive(p, 3)
    assert witt.check_primitive_degree_one(z).ok
    assert z.digits()[0] == t(p, 1, p - 1)
    # p itself is not primitive of degree one in this sense: zbar_0 = 0
    assert not witt.check_primitive_degree_one(witt.witt_p(p, 3)).ok


@settings(max_examples=25)
@given(witt_triples(max_len=3))
def test_divide_by_z_inverts_multiplication(abc):
    q = abc[0]
    z = witt.standard_primitive(q.p, q.N)
    assert witt.divide_by_z(z * q, z) == q


def test_not_divisible():
    z = witt.standard_primitive(2, 2)
    with pytest.raises(NotDivisible) as info:
        witt.divide_by_z(witt_of_integer(1, 2, 2), z)
    assert info.value.digit == 0
    truncated = WittVector(2, z.coords, Fraction(4))
    with pytest.raises(PrecisionMismatch):
        witt.divide_by_z(truncated, truncated)


@pytest.mark.parametrize("p", [2, 3])
def test_p_equals_t_modulo_z(p):
    z = witt.standard_primitive(p, 3)
    assert witt.theta_equal(witt.witt_p(p, 3), teichmuller(t(p), 3), z)
    assert not witt.theta_equal(witt_of_integer(1, p, 3), witt_of_integer(0, p, 3), z)


def test_tilt_add_of_teichmuller_systems():
    p, N, depth = 2, 2, 2
    z = witt.standard_primitive(p, N)
    xs = witt.teichmuller_system(t(p, 1), depth + 1, N)
    ys = witt.teichmuller_system(t(p, 2), depth + 1, N)
    res = witt.tilt_add(xs, ys, z, depth)
    assert len(res.components) == depth + 1
    assert res.stable[-1] is None
    bad = [xs[0], xs[0], xs[0]]
    with pytest.raises(NotCompatible):
        witt.tilt_add(bad, ys, z, depth)
    with pytest.raises(ValueError):
        witt.tilt_add(xs[:1], ys, z, depth)


def test_tilt_add_strict_reports_unsettled_component():
    p, N = 2, 2
    z = witt.standard_primitive(p, N)
    xs = witt.teichmuller_system(t(p, 1), 2, N)
    ys = witt.teichmuller_system(t(p, 0), 2, N)
    # t + 1 has not settled after one step; at depth 2 the deepest check passes
    res = witt.tilt_add(xs, ys, z, 1)
    assert res.stable == [False, None]
    with pytest.raises(Unstable) as info:
        witt.tilt_add(xs, ys, z, 1, strict=True)
    assert info.value.index == 0
    xs3 = witt.teichmuller_system(t(p, 1), 3, N)
    ys3 = witt.teichmuller_system(t(p, 0), 3, N)
    assert witt.tilt_add(xs3, ys3, z, 2).stable == [True, False, None]
