"""Univariate polynomials over Q in the variable T."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from reified.values import as_fraction, format_fraction, padic_valuation


class Poly:
    """Immutable polynomial with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``T**i``; trailing zeros are trimmed,
    so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = hash(self.coeffs)

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def T(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def linear(cls, root) -> Poly:
        """``T - root``."""
        return cls([-as_fraction(root), 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, z) -> Fraction:
        z = as_fraction(z)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def shift(self, a) -> Poly:
        """Coefficients of ``P(T + a)``, i.e. ``P`` expanded in powers of ``T - a``."""
        a = as_fraction(a)
        n = len(self.coeffs)
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            apow = Fraction(1)
            for k in range(i, -1, -1):
                out[k] += c * comb(i, k) * apow
                apow *= a
        return Poly(out)

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc()
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - dq - 1, -1, -1):
            c = rem[k + dq] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def to_json(self) -> list[str]:
        return [format_fraction(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, obj) -> Poly:
        if isinstance(obj, (int, str)):
            return cls.const(as_fraction(obj))
        return cls(as_fraction(c) for c in obj)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono:
                terms.append(f"{c}*{mono}")
            else:
                terms.append(f"{c}")
        return " + ".join(reversed(terms))


def poly_gcd(polys: Sequence[Poly]) -> Poly:
    """Monic gcd over Q (zero if all inputs are zero)."""
    g = Poly()
    for f in polys:
        a, b = g, f
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        g = a.monic()
    return g


def newton_slopes(f: Poly, p: int) -> list[tuple[Fraction, int]]:
    """Segments ``(slope, length)`` of the lower convex hull of ``(i, v_p(a_i))``.

    A segment of slope ``s`` and horizontal length ``l`` accounts for ``l``
    roots (with multiplicity) of ``p``-adic valuation ``-s``.  Roots at 0
    (from a vanishing constant term) are reported with slope ``+inf`` encoded
    as ``None``; they are returned as ``(None, multiplicity)``.
    """
    if f.is_zero():
        raise ValueError("Newton polygon of 0")
    low = 0
    while f.coeffs[low] == 0:
        low += 1
    pts = [(i, padic_valuation(c, p)) for i, c in enumerate(f.coeffs) if c and i >= low]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out: list[tuple[Fraction | None, int]] = []
    if low:
        out.append((None, low))
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return out


def root_valuations(f: Poly, p: int) -> list[tuple[Fraction | None, int]]:
    """``(v_p(root), multiplicity)`` for the roots of ``f`` in an algebraic closure.

    ``None`` stands for the root 0 (infinite valuation).
    """
    return [(None if s is None else -s, m) for s, m in newton_slopes(f, p)]
