"""Reified values of rank at most three.

A :class:`Magnitude` is an exact positive real ``c * p**e`` with ``c`` a
rational whose numerator and denominator are prime to ``p`` and ``e`` a
rational exponent.  A :class:`Value` is either :data:`ZERO` or a triple
``(lead, mag, inf)`` standing for ``U**lead * mag * eps**inf``, where ``U`` is
larger than every real and ``eps`` is a positive infinitesimal.  Values are
ordered lexicographically on ``(lead, mag, -inf)``.
"""

from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

Rational = Fraction | int | str


def as_fraction(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def padic_valuation(x: Rational, p: int) -> int:
    """Exponent of ``p`` in a nonzero rational."""
    x = as_fraction(x)
    if x == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@functools.total_ordering
@dataclass(frozen=True)
class Magnitude:
    """The positive real ``c * p**e`` in normal form."""

    c: Fraction
    e: Fraction
    p: int

    def __post_init__(self):
        c = as_fraction(self.c)
        e = as_fraction(self.e)
        if c <= 0:
            raise ValueError(f"magnitude must be positive, got {c}")
        if c != 1:
            v = padic_valuation(c, self.p)
            if v:
                c = c / Fraction(self.p) ** v
                e = e + v
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "e", e)

    @classmethod
    def of(cls, x: Rational, p: int) -> Magnitude:
        return cls(as_fraction(x), Fraction(0), p)

    @classmethod
    def one(cls, p: int) -> Magnitude:
        return cls(Fraction(1), Fraction(0), p)

    @classmethod
    def ppow(cls, e: Rational, p: int) -> Magnitude:
        return cls(Fraction(1), as_fraction(e), p)

    @property
    def in_p_power_group(self) -> bool:
        return self.c == 1

    def _check(self, other: Magnitude):
        if self.p != other.p:
            raise ValueError(f"magnitudes over different primes {self.p} and {other.p}")

    def __mul__(self, other):
        if isinstance(other, Magnitude):
            self._check(other)
            return Magnitude(self.c * other.c, self.e + other.e, self.p)
        if isinstance(other, (int, Fraction)):
            return self * Magnitude.of(other, self.p)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Magnitude.of(other, self.p)
        self._check(other)
        return Magnitude(self.c / other.c, self.e - other.e, self.p)

    def inverse(self) -> Magnitude:
        return Magnitude(1 / self.c, -self.e, self.p)

    def __pow__(self, n: int) -> Magnitude:
        return Magnitude(self.c ** n, self.e * n, self.p)

    def root(self, k: int) -> Magnitude:
        """Exact ``k``-th root; raises ValueError when ``c`` has none in Q."""
        if k <= 0:
            raise ValueError("root index must be positive")
        num = _int_root(self.c.numerator, k)
        den = _int_root(self.c.denominator, k)
        if num is None or den is None:
            raise ValueError(f"{self} has no rational {k}-th root of its unit part")
        return Magnitude(Fraction(num, den), self.e / k, self.p)

    def compare(self, other: Magnitude) -> int:
        self._check(other)
        ratio = self.c / other.c
        d = other.e - self.e
        # compare ratio against p**d with d = n/m, m > 0
        if d.denominator == 1:
            rhs = Fraction(self.p) ** d.numerator
            lhs = ratio
        else:
            lhs = ratio ** d.denominator
            rhs = Fraction(self.p) ** d.numerator
        return (lhs > rhs) - (lhs < rhs)

    def __lt__(self, other):
        if not isinstance(other, Magnitude):
            return NotImplemented
        return self.compare(other) < 0

    def __float__(self):
        return float(self.c) * float(self.p) ** float(self.e)

    def to_json(self) -> dict:
        return {"c": format_fraction(self.c), "e": format_fraction(self.e)}

    @classmethod
    def from_json(cls, obj: Any, p: int) -> Magnitude:
        if isinstance(obj, dict):
            return cls(as_fraction(obj.get("c", 1)), as_fraction(obj.get("e", 0)), p)
        return cls.of(as_fraction(obj), p)

    def __repr__(self):
        if self.c == 1:
            return f"{self.p}^({self.e})"
        if self.e == 0:
            return f"{self.c}"
        return f"{self.c}*{self.p}^({self.e})"


def _int_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


class Cmp(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1


@functools.total_ordering
@dataclass(frozen=True)
class Value:
    """``U**lead * mag * eps**inf``, or zero when ``mag`` is None."""

    lead: int = 0
    mag: Magnitude | None = None
    inf: int = 0

    def __post_init__(self):
        if self.mag is None and (self.lead or self.inf):
            raise ValueError("ZERO carries no lead or infinitesimal part")

    @classmethod
    def real(cls, mag: Magnitude) -> Value:
        """Image of a positive real under the reification."""
        return cls(0, mag, 0)

    @property
    def is_zero(self) -> bool:
        return self.mag is None

    @property
    def commensurable(self) -> bool:
        return self.mag is not None and self.lead == 0

    def real_part(self) -> Magnitude | None:
        """Infimum of the reals dominating this value (None for 0)."""
        if self.mag is None or self.lead < 0:
            return None
        if self.lead > 0:
            raise ValueError("value exceeds every real")
        return self.mag

    def __mul__(self, other):
        if isinstance(other, Magnitude):
            other = Value.real(other)
        if not isinstance(other, Value):
            return NotImplemented
        if self.mag is None or other.mag is None:
            return ZERO
        return Value(self.lead + other.lead, self.mag * other.mag, self.inf + other.inf)

    __rmul__ = __mul__

    def inverse(self) -> Value:
        if self.mag is None:
            raise ZeroDivisionError("ZERO has no inverse")
        return Value(-self.lead, self.mag.inverse(), -self.inf)

    def __truediv__(self, other):
        if isinstance(other, Magnitude):
            other = Value.real(other)
        return self * other.inverse()

    def __pow__(self, n: int) -> Value:
        if self.mag is None:
            if n == 0:
                raise ValueError("0**0")
            return ZERO
        return Value(self.lead * n, self.mag ** n, self.inf * n)

    def __eq__(self, other):
        if isinstance(other, Magnitude):
            other = Value.real(other)
        if not isinstance(other, Value):
            return NotImplemented
        return (self.lead, self.mag, self.inf) == (other.lead, other.mag, other.inf)

    def __hash__(self):
        return hash((self.lead, self.mag, self.inf))

    def __lt__(self, other):
        if isinstance(other, Magnitude):
            other = Value.real(other)
        if not isinstance(other, Value):
            return NotImplemented
        return value_cmp(self, other) is Cmp.LT

    def to_json(self):
        if self.mag is None:
            return "zero"
        out = {"lead": self.lead, "inf": self.inf}
        out.update(self.mag.to_json())
        return out

    @classmethod
    def from_json(cls, obj: Any, p: int) -> Value:
        if obj == "zero" or obj == 0:
            return ZERO
        if isinstance(obj, dict):
            mag = Magnitude(as_fraction(obj.get("c", 1)), as_fraction(obj.get("e", 0)), p)
            return cls(int(obj.get("lead", 0)), mag, int(obj.get("inf", 0)))
        return cls.real(Magnitude.of(as_fraction(obj), p))

    def __repr__(self):
        if self.mag is None:
            return "ZERO"
        return f"Value({self.lead}, {self.mag!r}, {self.inf})"


ZERO = Value()


def value_cmp(x: Value, y: Value) -> Cmp:
    if x.mag is None or y.mag is None:
        if x.mag is None and y.mag is None:
            return Cmp.EQ
        return Cmp.LT if x.mag is None else Cmp.GT
    if x.lead != y.lead:
        return Cmp.GT if x.lead > y.lead else Cmp.LT
    c = x.mag.compare(y.mag)
    if c:
        return Cmp(c)
    if x.inf != y.inf:
        return Cmp.GT if x.inf < y.inf else Cmp.LT
    return Cmp.EQ


def value_mul(x: Value, y: Value) -> Value:
    return x * y


def value_max(values: Iterable[Value]) -> Value:
    best = ZERO
    for v in values:
        if value_cmp(v, best) is Cmp.GT:
            best = v
    return best


class Retraction:
    """Commensurable part of a bounded reified semivaluation.

    Values outside the commensurable subgroup (lead != 0) are sent to zero.
    """

    def __init__(self, v: Callable[[Any], Value]):
        # retracting twice is retracting once
        self.base = v.base if isinstance(v, Retraction) else v

    def __call__(self, a) -> Value:
        val = self.base(a)
        return val if val.commensurable else ZERO

    def __repr__(self):
        return f"Retraction({self.base!r})"


def retract(v: Callable[[Any], Value]) -> Retraction:
    return Retraction(v)


@dataclass
class OrderTuple:
    """Sampled order relation ``(a, b, q) -> 1 iff v(a) >= q v(b)``.

    ``items`` and ``scales`` are the ranges the axiom checker quantifies
    over.  When ``source`` is set, entries outside ``entries`` are computed
    on demand; otherwise unsampled entries are reported as missing.
    """

    entries: dict
    items: tuple
    scales: tuple
    zero: Any
    one: Any
    source: Callable[[Any], Value] | None = None
    _values: dict = field(default_factory=dict, repr=False)

    def value(self, a) -> Value:
        try:
            return self._values[a]
        except KeyError:
            val = self._values[a] = self.source(a)
            return val

    def get(self, a, b, q) -> int | None:
        key = (a, b, q)
        bit = self.entries.get(key)
        if bit is None and self.source is not None:
            va, vb = self.value(a), self.value(b)
            bit = int(not (va < vb * q))
            self.entries[key] = bit
        return bit


def order_tuple_of(v: Callable[[Any], Value], items: Iterable, scales: Iterable[Magnitude],
                   zero=None, one=None) -> OrderTuple:
    """Order tuple of ``v`` quantified over ``items`` and ``scales``.

    The zero and one of the ring are always added to the item range; the
    scale range is closed under inversion and contains 1.
    """
    items = list(items)
    if zero is None or one is None:
        sample = items[0]
        zero = sample * 0 if zero is None else zero
        one = sample ** 0 if one is None else one
    ring_items = _dedupe([zero, one, *items])
    scales = list(scales)
    if not scales:
        raise ValueError("need at least one scale to fix the prime")
    p = scales[0].p
    scale_range = _dedupe([Magnitude.one(p), *scales, *(q.inverse() for q in scales)])
    return OrderTuple({}, tuple(ring_items), tuple(scale_range), zero, one, source=v)


def _dedupe(xs):
    seen, out = set(), []
    for x in xs:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def to_json(self):
        return {"axiom": self.axiom, "witness": [repr(w) for w in self.witness]}


def check_axioms(t: OrderTuple) -> list[Violation]:
    """All sampled violations of the nine order-relation axioms.

    Instances whose hypotheses or conclusion involve an entry that is not
    sampled are skipped.
    """
    out: list[Violation] = []
    items, scales = t.items, t.scales
    zero, one = t.zero, t.one
    prod_cache: dict = {}
    sum_cache: dict = {}
    scale_prod: dict = {}

    def mul(a, b):
        key = (a, b)
        r = prod_cache.get(key)
        if r is None:
            r = prod_cache[key] = a * b
        return r

    def add(a, b):
        key = (a, b)
        r = sum_cache.get(key)
        if r is None:
            r = sum_cache[key] = a + b
        return r

    def smul(q, r):
        key = (q, r)
        s = scale_prod.get(key)
        if s is None:
            s = scale_prod[key] = q * r
        return s

    g = t.get
    p = scales[0].p if scales else None
    unit = Magnitude.one(p) if p else None

    for a in items:
        if unit is not None and g(a, a, unit) == 0:
            out.append(Violation("i", (a,)))
    for a, b in itertools.product(items, repeat=2):
        for q in scales:
            if g(a, b, q) == 0 and g(b, a, q.inverse()) == 0:
                out.append(Violation("ii", (a, b, q)))
    true_triples = [(a, b, q) for a, b in itertools.product(items, repeat=2)
                    for q in scales if g(a, b, q) == 1]
    by_first: dict = {}
    for a, b, q in true_triples:
        by_first.setdefault(a, []).append((b, q))
    for a, b, q in true_triples:
        for c, r in by_first.get(b, ()):
            if g(a, c, smul(q, r)) == 0:
                out.append(Violation("iii", (a, b, c, q, r)))
    for a, b, q in true_triples:
        for c, d, r in true_triples:
            if g(mul(a, c), mul(b, d), smul(q, r)) == 0:
                out.append(Violation("iv", (a, b, c, d, q, r)))
    for q in scales:
        if g(zero, one, q) == 1:
            out.append(Violation("v", (q,)))
        if q > unit and g(one, one, q) == 1:
            out.append(Violation("vi", (q,)))
    for a, b, c in itertools.product(items, repeat=3):
        bc = add(b, c)
        for q in scales:
            if g(a, b, q) == 1 and g(a, c, q) == 1 and g(a, bc, q) == 0:
                out.append(Violation("vii", (a, b, c, q)))
    for a, b, c in itertools.product(items, repeat=3):
        ac, bc = mul(a, c), mul(b, c)
        for q in scales:
            if g(ac, bc, q) == 1 and g(zero, c, unit) == 0 and g(a, b, q) == 0:
                out.append(Violation("viii", (a, b, c, q)))
    for a in items:
        for q in scales:
            if g(a, zero, q) == 0:
                out.append(Violation("ix", (a, q)))
    return out


def kernel_of(t: OrderTuple) -> list:
    """Sampled kernel ``{a : v_{0,a,1} = 1}``."""
    unit = Magnitude.one(t.scales[0].p)
    return [a for a in t.items if t.get(t.zero, a, unit) == 1]
