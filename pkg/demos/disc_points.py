"""Points of the closed unit disc over Q_2 and their values on a few polynomials."""

from fractions import Fraction

from reified.disc import (
    BaseField, GaussPoint, MonomialPoint, Rank2Point, Side, Type1Point,
    classify, upper_branch_point, weierstrass, member,
)
from reified.poly import Poly
from reified.values import Magnitude, Value, retract

K = BaseField.padic(2)
T = Poly.T()
polys = {"T": T, "T - 2": T - 2, "T^2 - 2": T * T - 2}

points = [
    Type1Point(K, Fraction(2)),
    GaussPoint(K, 0, Magnitude.ppow(-1, 2)),
    GaussPoint(K, 0, K.mag(Fraction(1, 3))),
    Rank2Point(K, 0, Magnitude.ppow(-1, 2), Side.BELOW),
    upper_branch_point(K),
]

for x in points:
    print(f"type {classify(x)}  {x}")
    for name, P in polys.items():
        print(f"    v({name}) = {x(P)}")

# the upper branch point sees T as infinitesimally bigger than 1
up = upper_branch_point(K)
print("\nupper branch inside {|T| <= 1}?", member(up, weierstrass(K, T, K.one())))

# retraction forgets values outside the commensurable part
nc = MonomialPoint(K, Value(-1, K.one(), 0))
r = retract(nc)
print("monomial point with v(T) below every real:", nc(T), "->", r(T))
