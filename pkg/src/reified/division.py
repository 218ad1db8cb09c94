"""Leading terms and division for polynomials over a trivially normed field.

Polynomials are dicts from exponent tuples to rational coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from reified.errors import InternalCheck, ZeroPolynomial
from reified.values import Magnitude, format_fraction

MPoly = dict  # tuple[int, ...] -> Fraction


def mclean(x: dict) -> MPoly:
    return {tuple(k): Fraction(v) for k, v in sorted(x.items()) if v}


def madd(a: MPoly, b: MPoly, scale: Fraction = Fraction(1)) -> MPoly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + scale * v
    return {k: v for k, v in out.items() if v}


def mmul(a: MPoly, b: MPoly) -> MPoly:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            k = tuple(s + t for s, t in zip(i, j))
            out[k] = out.get(k, Fraction(0)) + x * y
    return {k: v for k, v in out.items() if v}


def mterm(idx: tuple, c: Fraction) -> MPoly:
    return {idx: Fraction(c)} if c else {}


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _grlex(idx: tuple) -> tuple:
    return (sum(idx), idx)


@dataclass(frozen=True)
class WeightedOrder:
    """Compare indices by ``prod r_i^e_i``, breaking ties graded-lexicographically.

    Graded-lex puts larger total degree first, then the index whose first
    differing exponent is larger.
    """

    radii: tuple[Magnitude, ...]

    def weight(self, idx: tuple) -> Magnitude:
        w = Magnitude.one(self.radii[0].p)
        for r, e in zip(self.radii, idx):
            w = w * r ** e
        return w

    def key(self, idx: tuple):
        return (self.weight(idx), _grlex(idx))

    @property
    def is_well_order(self) -> bool:
        # with all radii >= 1 the weight is a monomial order refining divisibility
        one = Magnitude.one(self.radii[0].p)
        return all(r >= one for r in self.radii)

    def division_key(self, idx: tuple):
        """Key of the well-ordering used to drive division."""
        return self.key(idx) if self.is_well_order else _grlex(idx)


def leading_term(x: MPoly, ord: WeightedOrder) -> tuple[tuple, Fraction]:
    if not x:
        raise ZeroPolynomial("leading term of 0")
    idx = max(x, key=ord.key)
    return idx, x[idx]


def _leading_for_division(x: MPoly, ord: WeightedOrder) -> tuple[tuple, Fraction]:
    idx = max(x, key=ord.division_key)
    return idx, x[idx]


@dataclass
class DivisionResult:
    quotients: list
    remainder: MPoly
    steps: int

    def to_json(self) -> dict:
        return {"quotients": [encode(q) for q in self.quotients],
                "remainder": encode(self.remainder), "steps": self.steps}


def divide(x: MPoly, G: Sequence[MPoly], ord: WeightedOrder, check: bool = True) -> DivisionResult:
    """Multivariate division of ``x`` by ``G``.

    The weighted order drives the division when it is a well-ordering (all
    radii at least 1); otherwise graded-lex does, since weight-first
    comparison with a radius below 1 admits infinite descending chains.
    With ``check`` set, the identity ``x = sum q_g g + rem + rest`` and
    the strict decrease of the leading index of ``rest`` are asserted after
    every step.
    """
    x = mclean(x)
    G = [mclean(g) for g in G]
    if any(not g for g in G):
        raise ZeroPolynomial("zero divisor")
    leads = [_leading_for_division(g, ord) for g in G]
    quotients: list[MPoly] = [{} for _ in G]
    rem: MPoly = {}
    rest = dict(x)
    steps = 0
    prev = None
    while rest:
        idx, c = _leading_for_division(rest, ord)
        key = ord.division_key(idx)
        if prev is not None and not key < prev:
            raise InternalCheck(f"working term did not decrease at step {steps}")
        prev = key
        for k, (li, lc) in enumerate(leads):
            if _divides(li, idx):
                mono = tuple(a - b for a, b in zip(idx, li))
                coef = c / lc
                quotients[k] = madd(quotients[k], mterm(mono, coef))
                rest = madd(rest, mmul(mterm(mono, coef), G[k]), -1)
                break
        else:
            rem[idx] = c
            del rest[idx]
        steps += 1
        if check:
            total = madd(rem, rest)
            for q, g in zip(quotients, G):
                total = madd(total, mmul(q, g))
            if total != x:
                raise InternalCheck(f"division identity broken at step {steps}")
    return DivisionResult([mclean(q) for q in quotients], mclean(rem), steps)


def encode(x: MPoly) -> dict:
    return {",".join(map(str, k)): format_fraction(v) for k, v in sorted(x.items())}


def decode(obj: dict, nvars: int | None = None) -> MPoly:
    out = {}
    for k, v in obj.items():
        idx = tuple(int(e) for e in str(k).split(","))
        if nvars is not None and len(idx) != nvars:
            raise ValueError(f"index {k} has the wrong number of variables")
        out[idx] = Fraction(v)
    return mclean(out)
