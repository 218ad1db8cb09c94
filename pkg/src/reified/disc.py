"""Points of the closed unit disc and exact evaluation on ``K[T]``.

The base field ``K`` is emulated by exact rationals carrying either a
``p``-adic norm or the trivial norm.  Points are reified semivaluations on
``K[T]``:

* :class:`Type1Point` -- ``P |-> |P(z)|``;
* :class:`GaussPoint` -- the ``rho``-Gauss valuation on ``K[T - z]``
  (type 2 when ``rho`` lies in the value group, type 3 otherwise);
* :class:`Rank2Point` -- the rank-2 specialisation of a Gauss point along
  the branch below (``T - a`` infinitesimally smaller than ``rho``) or above
  it (infinitesimally larger); type 5 or 6 after the same test;
* :class:`MonomialPoint` -- ``sum a_i T^i |-> max |a_i| vT^i`` for a
  non-real value ``vT``.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from reified.errors import (
    PreconditionViolated,
    Type4Unsupported,
    Unclassifiable,
    UnitIdealFailure,
)
from reified.poly import Poly, poly_gcd, root_valuations
from reified.values import (
    ZERO,
    Magnitude,
    Value,
    as_fraction,
    format_fraction,
    padic_valuation,
    value_max,
)


@dataclass(frozen=True)
class BaseField:
    """``mode`` is ``"padic"`` or ``"trivial"``; ``group`` is ``"Z"`` or ``"Q"``.

    In trivial mode ``p`` only fixes the normal form of magnitudes.
    """

    mode: str = "padic"
    p: int = 2
    group: str = "Q"

    def __post_init__(self):
        if self.mode not in ("padic", "trivial"):
            raise ValueError(f"unknown base field mode {self.mode!r}")
        if self.group not in ("Z", "Q"):
            raise ValueError(f"unknown value group {self.group!r}")

    @classmethod
    def padic(cls, p: int, group: str = "Q") -> BaseField:
        return cls("padic", p, group)

    @classmethod
    def trivial(cls, p: int = 2) -> BaseField:
        return cls("trivial", p, "Q")

    def mag(self, x) -> Magnitude:
        return Magnitude.of(x, self.p)

    def one(self) -> Magnitude:
        return Magnitude.one(self.p)

    def norm(self, x) -> Magnitude | None:
        """``|x|`` as a magnitude, or None for ``x = 0``."""
        x = as_fraction(x)
        if x == 0:
            return None
        if self.mode == "trivial":
            return Magnitude.one(self.p)
        return Magnitude.ppow(-padic_valuation(x, self.p), self.p)

    def value(self, x) -> Value:
        m = self.norm(x)
        return ZERO if m is None else Value.real(m)

    def in_value_group(self, rho: Magnitude) -> bool:
        if self.mode == "trivial":
            return rho == Magnitude.one(self.p)
        if self.group == "Z":
            return rho.c == 1 and rho.e.denominator == 1
        return rho.c == 1

    def to_json(self) -> dict:
        if self.mode == "trivial":
            return {"mode": "trivial", "p": self.p}
        return {"mode": "padic", "p": self.p, "group": self.group}

    @classmethod
    def from_json(cls, obj: dict) -> BaseField:
        mode = obj.get("mode", "padic")
        if mode == "trivial":
            return cls.trivial(int(obj.get("p", 2)))
        return cls.padic(int(obj["p"]), str(obj.get("group", "Q")))


def gauss_norm(K: BaseField, P: Poly, radius: Magnitude | None = None) -> Magnitude | None:
    """``max |a_i| radius**i`` (None for the zero polynomial)."""
    r = radius if radius is not None else K.one()
    best = None
    for i, c in enumerate(P.coeffs):
        m = K.norm(c)
        if m is None:
            continue
        m = m * r ** i
        if best is None or m > best:
            best = m
    return best


class Side(enum.Enum):
    BELOW = "below"
    ABOVE = "above"


class DiscPoint:
    K: BaseField

    def evaluate(self, P: Poly) -> Value:
        raise NotImplementedError

    def __call__(self, P) -> Value:
        if not isinstance(P, Poly):
            P = Poly.const(P)
        return self.evaluate(P)


def _check_center(K: BaseField, z: Fraction):
    m = K.norm(z)
    if m is not None and m > K.one():
        raise PreconditionViolated(f"center {z} lies outside the closed unit disc")


def _check_radius(K: BaseField, rho: Magnitude):
    if rho.p != K.p:
        raise PreconditionViolated("radius magnitude uses a different prime")
    if rho > K.one():
        raise PreconditionViolated(f"radius {rho!r} exceeds 1")


def _monomial_max(K: BaseField, P: Poly, R: Value) -> Value:
    out = ZERO
    power = Value.real(K.one())
    for c in P.coeffs:
        if c:
            out = value_max((out, K.value(c) * power))
        power = power * R
    return out


@dataclass(frozen=True)
class Type1Point(DiscPoint):
    K: BaseField
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "z", as_fraction(self.z))
        _check_center(self.K, self.z)

    def evaluate(self, P: Poly) -> Value:
        return self.K.value(P(self.z))

    def to_json(self):
        return {"type": "type1", "z": format_fraction(self.z)}


@dataclass(frozen=True)
class GaussPoint(DiscPoint):
    K: BaseField
    z: Fraction
    rho: Magnitude

    def __post_init__(self):
        object.__setattr__(self, "z", as_fraction(self.z))
        _check_center(self.K, self.z)
        _check_radius(self.K, self.rho)

    def evaluate(self, P: Poly) -> Value:
        return _monomial_max(self.K, P.shift(self.z), Value.real(self.rho))

    def to_json(self):
        return {"type": "gauss", "z": format_fraction(self.z), "rho": self.rho.to_json()}


@dataclass(frozen=True)
class Rank2Point(DiscPoint):
    K: BaseField
    a: Fraction
    rho: Magnitude
    side: Side

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        if not isinstance(self.side, Side):
            object.__setattr__(self, "side", Side(self.side))
        _check_center(self.K, self.a)
        _check_radius(self.K, self.rho)

    @property
    def radius(self) -> Value:
        return Value(0, self.rho, 1 if self.side is Side.BELOW else -1)

    def evaluate(self, P: Poly) -> Value:
        return _monomial_max(self.K, P.shift(self.a), self.radius)

    def to_json(self):
        return {"type": "rank2", "a": format_fraction(self.a), "rho": self.rho.to_json(),
                "side": self.side.value}


@dataclass(frozen=True)
class MonomialPoint(DiscPoint):
    K: BaseField
    vT: Value

    def __post_init__(self):
        if self.vT.is_zero or (self.vT.lead == 0 and self.vT.inf == 0):
            raise PreconditionViolated("monomial points need a non-real value for T")

    def evaluate(self, P: Poly) -> Value:
        return _monomial_max(self.K, P, self.vT)

    def to_json(self):
        return {"type": "monomial", "vT": self.vT.to_json()}


def upper_branch_point(K: BaseField) -> Rank2Point:
    """Rank-2 point above the Gauss point, sending ``T`` to ``(0, 1)`` infinitesimally above 1."""
    return Rank2Point(K, Fraction(0), K.one(), Side.ABOVE)


def type4_point(*_args, **_kwargs):
    raise Type4Unsupported("type 4 points need an infinite nested sequence of discs")


def point_from_json(K: BaseField, obj: dict) -> DiscPoint:
    kind = obj.get("type")
    p = K.p
    if kind == "type1":
        return Type1Point(K, as_fraction(obj["z"]))
    if kind == "gauss":
        return GaussPoint(K, as_fraction(obj.get("z", 0)), Magnitude.from_json(obj["rho"], p))
    if kind == "rank2":
        return Rank2Point(K, as_fraction(obj.get("a", 0)), Magnitude.from_json(obj["rho"], p),
                          Side(obj["side"]))
    if kind == "monomial":
        return MonomialPoint(K, Value.from_json(obj["vT"], p))
    if kind == "type4":
        type4_point()
    raise ValueError(f"unknown point type {kind!r}")


def evaluate(x: DiscPoint, P: Poly) -> Value:
    return x.evaluate(P)


def classify(x: DiscPoint) -> int:
    if isinstance(x, Type1Point):
        return 1
    if isinstance(x, GaussPoint):
        return 2 if x.K.in_value_group(x.rho) else 3
    if isinstance(x, Rank2Point):
        return 5 if x.K.in_value_group(x.rho) else 6
    raise Unclassifiable(f"{type(x).__name__} has no Berkovich type")


def unit_ideal_check(K: BaseField, fs: Sequence[Poly]) -> bool:
    """True iff the ``fs`` have no common zero in the closed unit disc.

    Over the trivially valued field every algebraic number lies in the
    disc, so only a constant gcd passes.
    """
    if not fs or any(f.is_zero() for f in fs):
        raise PreconditionViolated("unit_ideal_check needs nonzero polynomials")
    g = poly_gcd(fs)
    if g.is_constant():
        return True
    if K.mode == "trivial":
        return False
    return all(v is not None and v < 0 for v, _ in root_valuations(g, K.p))


class RationalSubspace:
    """``{v : v(f_i) <= q_i v(f_0) != 0, i = 1..n}``."""

    def __init__(self, K: BaseField, f0: Poly, params: Sequence[Poly],
                 scales: Sequence[Magnitude], check: bool = True):
        if len(params) != len(scales):
            raise ValueError("need one scale per parameter")
        self.K = K
        self.f0 = f0
        self.params = tuple(params)
        self.scales = tuple(scales)
        if check and not unit_ideal_check(K, self.params):
            raise UnitIdealFailure(f"parameters {list(self.params)} do not generate the unit ideal")

    def __repr__(self):
        conds = ", ".join(f"v({f!r}) <= {q!r} v({self.f0!r})" for f, q in zip(self.params, self.scales))
        return f"RationalSubspace({conds})"

    def to_json(self) -> dict:
        return {"f0": self.f0.to_json(), "params": [f.to_json() for f in self.params],
                "scales": [q.to_json() for q in self.scales]}

    @classmethod
    def from_json(cls, K: BaseField, obj: dict) -> RationalSubspace:
        return cls(K, Poly.from_json(obj.get("f0", ["1/1"])),
                   [Poly.from_json(f) for f in obj["params"]],
                   [Magnitude.from_json(q, K.p) for q in obj["scales"]])


def whole_space(K: BaseField) -> RationalSubspace:
    return RationalSubspace(K, Poly.const(1), [Poly.const(1)], [K.one()])


def weierstrass(K: BaseField, f: Poly, q: Magnitude) -> RationalSubspace:
    """``{v(f) <= q}``, presented with ``f_0 = 1`` adjoined to the parameters."""
    return RationalSubspace(K, Poly.const(1), [f, Poly.const(1)], [q, K.one()])


def laurent_piece(K: BaseField, f: Poly, q: Magnitude) -> RationalSubspace:
    """``{v(f) >= q}`` presented as ``v(1) <= q^{-1} v(f)``."""
    return RationalSubspace(K, f, [Poly.const(1)], [q.inverse()])


def member(x: DiscPoint, U: RationalSubspace, require_nonzero: bool = True) -> bool:
    v0 = x.evaluate(U.f0)
    if require_nonzero and v0.is_zero:
        return False
    return all(not (v0 * q < x.evaluate(f)) for f, q in zip(U.params, U.scales))


def intersect(U: RationalSubspace, V: RationalSubspace) -> RationalSubspace:
    if U.K != V.K:
        raise ValueError("subspaces over different base fields")
    one = U.K.one()
    fs = [U.f0, *U.params]
    qs = [one, *U.scales]
    gs = [V.f0, *V.params]
    rs = [one, *V.scales]
    params, scales = [], []
    for f, q in zip(fs, qs):
        for g, r in zip(gs, rs):
            params.append(f * g)
            scales.append(q * r)
    return RationalSubspace(U.K, U.f0 * V.f0, params, scales)


class Graded(enum.Enum):
    IN_PLUS = "in_plus"
    IN_CIRC_ONLY = "in_circ_only"
    OUT = "out"


def graded_membership(K: BaseField, a: Poly, r: Magnitude, mode: str = "full") -> Graded:
    """Where ``a`` sits relative to the degree-``r`` piece of the graded ring.

    ``mode="full"`` takes the whole graded ring of ``K<T>`` as integral
    structure; ``mode="base_only"`` takes only the graded ring of ``K``, so
    ``a`` is integral in degree ``r`` iff it is a constant of norm ``<= r``
    plus a term of Gauss norm ``< r``.
    """
    g = gauss_norm(K, a)
    if g is not None and g > r:
        return Graded.OUT
    if mode == "full":
        return Graded.IN_PLUS
    if mode != "base_only":
        raise ValueError(f"unknown graded mode {mode!r}")
    const = K.norm(a.coeffs[0]) if a.coeffs else None
    rest = gauss_norm(K, a - Poly.const(a.coeffs[0] if a.coeffs else 0))
    if (const is None or const <= r) and (rest is None or rest < r):
        return Graded.IN_PLUS
    return Graded.IN_CIRC_ONLY


def graded_valuation_ring_test(x: DiscPoint, a: Poly, r: Magnitude) -> bool:
    """Membership of the class of ``a`` in degree ``r`` of the graded valuation ring at ``x``."""
    g = gauss_norm(x.K, a)
    if g is not None and g > r:
        raise PreconditionViolated(f"Gauss norm {g!r} exceeds degree {r!r}")
    return not (Value.real(r) < x.evaluate(a))


# -- sampling ---------------------------------------------------------------

def random_center(K: BaseField, rng: random.Random) -> Fraction:
    p = K.p
    if K.mode == "trivial":
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    den = rng.choice([d for d in range(1, 8) if d % p])
    return Fraction(rng.randint(-6, 6) * p ** rng.randint(0, 3), den)


def random_radius(K: BaseField, rng: random.Random) -> Magnitude:
    p = K.p
    kind = rng.randrange(4)
    if kind == 0:
        return Magnitude.ppow(-rng.randint(0, 3), p)
    if kind == 1:
        return Magnitude.ppow(Fraction(-rng.randint(1, 5), rng.choice([2, 3])), p)
    c = Fraction(rng.choice([q for q in (1, 3, 5, 7) if q % p]), rng.choice([q for q in (1, 3, 5, 7, 11) if q % p]))
    m = Magnitude(c, Fraction(-rng.randint(0, 2)), p)
    return m if m <= K.one() else m.inverse()


def random_value(K: BaseField, rng: random.Random) -> Value:
    lead = rng.choice([-1, 0, 0])
    inf = rng.choice([-1, 1]) if lead == 0 else rng.choice([-1, 0, 1])
    return Value(lead, random_radius(K, rng), inf)


def random_point(K: BaseField, rng: random.Random, kinds: Sequence[str] | None = None) -> DiscPoint:
    kind = rng.choice(list(kinds or ("type1", "gauss", "rank2", "monomial")))
    if kind == "type1":
        return Type1Point(K, random_center(K, rng))
    if kind == "gauss":
        return GaussPoint(K, random_center(K, rng), random_radius(K, rng))
    if kind == "rank2":
        return Rank2Point(K, random_center(K, rng), random_radius(K, rng), rng.choice(list(Side)))
    return MonomialPoint(K, random_value(K, rng))


def random_poly(rng: random.Random, max_degree: int = 4, p: int = 2) -> Poly:
    deg = rng.randint(0, max_degree)
    coeffs = []
    for _ in range(deg + 1):
        num = rng.randint(-9, 9) * p ** rng.randint(0, 2)
        den = rng.choice([1, 1, 2, 3, p])
        coeffs.append(Fraction(num, den))
    if not any(coeffs):
        coeffs[-1] = Fraction(1)
    return Poly(coeffs)
