"""Rational coverings, the Laurent constant, and glueing a 2x2 matrix."""

import random
from fractions import Fraction

from reified import cover, tate
from reified.disc import BaseField, laurent_piece, member, random_point, weierstrass
from reified.poly import Poly
from reified.values import Magnitude

K = BaseField.padic(2)
T = Poly.T()
one, half = K.one(), K.mag(Fraction(1, 2))

for p in (2, 3, 5):
    F = BaseField.padic(p)
    lc = cover.laurent_constant(F, [T, T - p], [F.one(), F.one()])
    print(f"p={p}: min over the disc of max(|T|, |T - {p}|) = {lc.value}, attained at {lc.argmin}")

cov = cover.StandardRationalCovering(K, [T, T - 2], [one, one])
ref = cover.laurent_refinement(cov)
print("\nLaurent refinement of {T, T - 2}:")
for piece in ref.pieces:
    print("   ", "".join(piece.signs), "empty" if piece.empty else f"meets U_i for i in {list(piece.plus)}")

pieces = [weierstrass(K, T, half), laurent_piece(K, T, half)]
rng = random.Random(0)
W = [x for x in (random_point(K, rng) for _ in range(200)) if any(member(x, U) for U in pieces)]
ref2 = cover.refine_to_standard_rational(K, pieces, W)
print(f"\nchecked on {ref2.checked} covered random points")
print("standard refinement of {|T| <= 1/2} u {|T| >= 1/2}:")
for piece in ref2.pieces:
    print(f"    {piece.poly!r} weight {piece.weight} inside inputs {list(piece.contained_in)}")

M = [[{0: Fraction(1), 1: Fraction(2)}, {-1: Fraction(4)}],
     [{-2: Fraction(2)}, {0: Fraction(3), 2: Fraction(2)}]]
res = tate.glue_free_module(K, one, M, Magnitude.ppow(-20, 2))
print(f"\nglueing: {res.iterations} iterations, |M - I| went {[str(n) for n in res.norms]}")
print("residual |M M2 - M1| =", res.residual)
