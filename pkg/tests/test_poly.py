from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from reified.poly import Poly, newton_slopes, poly_gcd, root_valuations

coeff = st.fractions(min_value=-20, max_value=20, max_denominator=9)
polys = st.lists(coeff, max_size=5).map(Poly)
points = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@given(polys, polys, points)
def test_ring_operations_commute_with_evaluation(P, Q, z):
    assert (P + Q)(z) == P(z) + Q(z)
    assert (P * Q)(z) == P(z) * Q(z)
    assert (P - Q)(z) == P(z) - Q(z)


@given(polys, points, points)
def test_shift_is_substitution(P, a, z):
    assert P.shift(a)(z) == P(z + a)


@given(polys, polys.filter(lambda Q: not Q.is_zero()))
def test_divmod_identity(P, Q):
    quo, rem = P.divmod(Q)
    assert quo * Q + rem == P
    assert rem.is_zero() or rem.degree < Q.degree


def test_divmod_by_zero():
    with pytest.raises(ZeroDivisionError):
        Poly.T().divmod(Poly())


def test_gcd_against_sympy():
    T = Poly.T()
    f = (T - 1) * (T - 2) * (T + 3)
    g = (T - 2) * (T + 3) * (T * T + 1)
    x = sympy.symbols("x")
    ref = sympy.Poly(sympy.gcd((x - 1) * (x - 2) * (x + 3), (x - 2) * (x + 3) * (x**2 + 1)), x)
    assert poly_gcd([f, g]) == Poly(reversed(ref.monic().all_coeffs()))
    assert poly_gcd([]) == Poly()


def test_json_round_trip():
    P = Poly([Fraction(1, 3), 0, -2])
    assert Poly.from_json(P.to_json()) == P
    assert Poly.from_json("5") == Poly.const(5)


def test_root_valuations_examples():
    assert root_valuations(Poly.linear(4), 2) == [(2, 1)]
    # T^2 - 2 has two roots of valuation 1/2
    assert root_valuations(Poly([-2, 0, 1]), 2) == [(Fraction(1, 2), 2)]
    # T (T - 3) (T - 1/3) at p = 3
    f = Poly.T() * Poly.linear(3) * Poly.linear(Fraction(1, 3))
    assert sorted(root_valuations(f, 3), key=str) == sorted([(None, 1), (1, 1), (-1, 1)], key=str)


@given(st.lists(st.sampled_from([1, 2, 4, 8, Fraction(1, 2), 3, 6, 12]), min_size=1, max_size=4))
def test_newton_polygon_counts_roots_by_valuation(roots):
    f = Poly.const(1)
    for r in roots:
        f = f * Poly.linear(r)
    counts = {}
    for r in roots:
        v = Fraction(0)
        x = Fraction(r)
        while x.numerator % 2 == 0:
            x /= 2
            v += 1
        while x.denominator % 2 == 0:
            x *= 2
            v -= 1
        counts[v] = counts.get(v, 0) + 1
    assert dict(root_valuations(f, 2)) == counts
    assert sum(m for _, m in newton_slopes(f, 2)) == len(roots)
