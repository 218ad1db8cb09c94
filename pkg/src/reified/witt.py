"""p-typical Witt vectors over the perfection of ``F_p[t]``.

Coefficients live in ``R^+``: finite sums ``sum c t^e`` with ``c`` in
``F_p`` and ``e >= 0`` in ``Z[1/p]``, normed by ``|t| = 1/p``.  An optional
precision ``M`` works in ``R^+ / t^{>M}`` instead.

Witt vectors are stored in Witt coordinates ``(x_0, ..., x_{N-1})``; the
Teichmüller digits ``zbar_n`` with ``x = sum p^n [zbar_n]`` are
``zbar_n = x_n^{1/p^n}``.  Addition and multiplication use the Witt
structure polynomials, derived once per prime from the ghost components
and reduced mod ``p``.  :func:`ghost_add` and :func:`ghost_mul` compute the
same operations independently by lifting to integer coefficients.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from reified.errors import NotCompatible, NotDivisible, PrecisionMismatch, Unstable
from reified.values import Magnitude, as_fraction, format_fraction

MAX_LENGTH = 4


def _is_p_adic_exponent(e: Fraction, p: int) -> bool:
    d = e.denominator
    while d % p == 0:
        d //= p
    return d == 1


class PerfectElement:
    """``sum c t^e`` over ``F_p`` (``mod=p``) or over ``Z`` (``mod=None``, for lifts)."""

    __slots__ = ("p", "terms", "M", "mod")

    def __init__(self, p: int, terms: dict | None = None, M: Fraction | None = None, mod: int | None = -1):
        self.p = p
        self.M = None if M is None else as_fraction(M)
        self.mod = p if mod == -1 else mod
        clean: dict[Fraction, int] = {}
        for e, c in (terms or {}).items():
            e = as_fraction(e)
            if e < 0 or not _is_p_adic_exponent(e, p):
                raise ValueError(f"exponent {e} is not a nonnegative element of Z[1/{p}]")
            if self.M is not None and e > self.M:
                continue
            clean[e] = clean.get(e, 0) + int(c)
        if self.mod is not None:
            clean = {e: c % self.mod for e, c in clean.items()}
        self.terms = {e: c for e, c in sorted(clean.items()) if c}

    @classmethod
    def monomial(cls, p: int, e=0, c: int = 1, M=None) -> PerfectElement:
        return cls(p, {as_fraction(e): c}, M)

    @classmethod
    def zero(cls, p: int, M=None) -> PerfectElement:
        return cls(p, {}, M)

    def _new(self, terms) -> PerfectElement:
        return PerfectElement(self.p, terms, self.M, self.mod)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, PerfectElement):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, tuple(self.terms.items())))

    def __add__(self, other: PerfectElement) -> PerfectElement:
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return self._new(out)

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._new({e: c * other for e, c in self.terms.items()})
        out: dict[Fraction, int] = {}
        M = self.M
        for e, c in self.terms.items():
            for f, d in other.terms.items():
                g = e + f
                if M is not None and g > M:
                    continue
                out[g] = out.get(g, 0) + c * d
        return self._new(out)

    __rmul__ = __mul__

    def frobenius(self, k: int = 1) -> PerfectElement:
        """``x^(p^k)``; negative ``k`` takes ``p^|k|``-th roots.  Only valid mod ``p``."""
        if self.mod != self.p:
            raise ValueError("Frobenius is additive only in characteristic p")
        factor = Fraction(self.p) ** k
        return self._new({e * factor: c for e, c in self.terms.items()})

    def __pow__(self, n: int) -> PerfectElement:
        if n < 0:
            raise ValueError("negative power")
        result = self._new({Fraction(0): 1})
        if self.mod == self.p:
            # split n in base p: x^n = prod F^j(x)^{d_j}
            j = 0
            while n:
                n, d = divmod(n, self.p)
                if d:
                    fj = self.frobenius(j)
                    for _ in range(d):
                        result = result * fj
                j += 1
            return result
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def min_exponent(self) -> Fraction | None:
        return next(iter(self.terms)) if self.terms else None

    def norm(self) -> Magnitude | None:
        """``p^(-min exponent)``; None for zero."""
        m = self.min_exponent()
        return None if m is None else Magnitude.ppow(-m, self.p)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def divide_monomial(self, d: PerfectElement) -> PerfectElement | None:
        """``self / d`` in ``R^+`` for a monomial ``d``, or None if not divisible."""
        if not d.is_monomial():
            raise ValueError("only monomial divisors are supported")
        (a, c), = d.terms.items()
        if any(e < a for e in self.terms):
            return None
        inv = pow(c, -1, self.p)
        return self._new({e - a: x * inv for e, x in self.terms.items()})

    def lift(self) -> PerfectElement:
        """Lift with coefficients in ``[0, p)`` to integer coefficients."""
        return PerfectElement(self.p, dict(self.terms), self.M, None)

    def reduce(self) -> PerfectElement:
        return PerfectElement(self.p, dict(self.terms), self.M, self.p)

    def exact_div(self, n: int) -> PerfectElement:
        out = {}
        for e, c in self.terms.items():
            if c % n:
                raise ArithmeticError(f"coefficient {c} not divisible by {n}")
            out[e] = c // n
        return self._new(out)

    def to_json(self) -> dict:
        return {format_fraction(e): c for e, c in self.terms.items()}

    @classmethod
    def from_json(cls, p: int, obj, M=None) -> PerfectElement:
        if isinstance(obj, (int, str)) and not isinstance(obj, bool):
            return cls(p, {Fraction(0): int(obj)}, M)
        return cls(p, {Fraction(k): int(v) for k, v in obj.items()}, M)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            if e == 0:
                parts.append(str(c))
            else:
                parts.append(("" if c == 1 else f"{c}*") + f"t^{e}")
        return " + ".join(parts)


# -- structure polynomials ------------------------------------------------------
# integer polynomials in X_0..X_{N-1}, Y_0..Y_{N-1} as dicts exponent-tuple -> int

NV = 2 * MAX_LENGTH


def _ip_clean(a: dict, mod: int | None) -> dict:
    if mod is None:
        return {k: v for k, v in a.items() if v}
    return {k: v % mod for k, v in a.items() if v % mod}


def _ip_add(a: dict, b: dict, mod: int | None, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + sign * v
    return _ip_clean(out, mod)


def _ip_mul(a: dict, b: dict, mod: int | None) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            k = tuple(s + t for s, t in zip(i, j))
            out[k] = out.get(k, 0) + x * y
    return _ip_clean(out, mod)


def _ip_pow(a: dict, n: int, mod: int | None) -> dict:
    result = {(0,) * NV: 1}
    base = a
    while n:
        if n & 1:
            result = _ip_mul(result, base, mod)
        n >>= 1
        if n:
            base = _ip_mul(base, base, mod)
    return result


def _ip_var(i: int) -> dict:
    idx = [0] * NV
    idx[i] = 1
    return {tuple(idx): 1}


def _ghost_poly(p: int, n: int, offset: int, mod: int) -> dict:
    out: dict = {}
    for i in range(n + 1):
        out = _ip_add(out, {k: v * p ** i for k, v in _ip_pow(_ip_var(offset + i), p ** (n - i), mod).items()}, mod)
    return out


@functools.lru_cache(maxsize=None)
def structure_polynomial(p: int, kind: str, n: int) -> tuple:
    """Witt sum (``kind="add"``) or product (``"mul"``) polynomial number ``n`` mod ``p``.

    Uses ``w_n(S) = w_n(X) + w_n(Y)`` (resp. ``*``) with ``w_n`` the ghost
    polynomials.  Since ``a = b mod p`` implies ``a^{p^k} = b^{p^k} mod p^{k+1}``,
    the previous polynomials are only needed mod ``p``, and the numerator
    only mod ``p^{n+1}``.  Returns a sorted tuple of ``(exponents, coefficient)``.
    """
    if n >= MAX_LENGTH:
        raise ValueError(f"structure polynomials are tabulated up to length {MAX_LENGTH}")
    mod = p ** (n + 1)
    gx = _ghost_poly(p, n, 0, mod)
    gy = _ghost_poly(p, n, MAX_LENGTH, mod)
    if kind == "add":
        target = _ip_add(gx, gy, mod)
    elif kind == "mul":
        target = _ip_mul(gx, gy, mod)
    else:
        raise ValueError(kind)
    for i in range(n):
        Si = dict(structure_polynomial(p, kind, i))
        term = _ip_pow(Si, p ** (n - i), p ** (n + 1 - i))
        target = _ip_add(target, {k: v * p ** i for k, v in term.items()}, mod, -1)
    out = {}
    for k, v in target.items():
        if v % p ** n:
            raise ArithmeticError("ghost recursion is not integral")
        c = (v // p ** n) % p
        if c:
            out[k] = c
    return tuple(sorted(out.items()))


def _evaluate(poly: tuple, xs: Sequence[PerfectElement], ys: Sequence[PerfectElement],
              zero: PerfectElement) -> PerfectElement:
    vals = list(xs) + [zero] * (MAX_LENGTH - len(xs)) + list(ys) + [zero] * (MAX_LENGTH - len(ys))
    cache: dict[tuple[int, int], PerfectElement] = {}

    def power(i, e):
        key = (i, e)
        r = cache.get(key)
        if r is None:
            r = cache[key] = vals[i] ** e
        return r

    acc = zero
    for idx, c in poly:
        # skip monomials with a vanishing variable
        if any(e and vals[i].is_zero() for i, e in enumerate(idx)):
            continue
        term = None
        for i, e in enumerate(idx):
            if e:
                f = power(i, e)
                term = f if term is None else term * f
        acc = acc + term * c
    return acc


# -- Witt vectors ---------------------------------------------------------------

@dataclass(frozen=True)
class WittVector:
    p: int
    coords: tuple[PerfectElement, ...]
    M: Fraction | None = None

    def __post_init__(self):
        if not 1 <= len(self.coords) <= MAX_LENGTH:
            raise ValueError(f"length must be between 1 and {MAX_LENGTH}")

    @property
    def N(self) -> int:
        return len(self.coords)

    def _zero(self) -> PerfectElement:
        return PerfectElement.zero(self.p, self.M)

    def _check(self, other: WittVector):
        if self.p != other.p:
            raise PrecisionMismatch("different primes")
        if self.N != other.N or self.M != other.M:
            raise PrecisionMismatch(f"lengths/precisions differ: ({self.N}, {self.M}) vs ({other.N}, {other.M})")

    def __add__(self, other: WittVector) -> WittVector:
        self._check(other)
        z = self._zero()
        coords = tuple(_evaluate(structure_polynomial(self.p, "add", n), self.coords, other.coords, z)
                       for n in range(self.N))
        return WittVector(self.p, coords, self.M)

    def __mul__(self, other: WittVector) -> WittVector:
        self._check(other)
        z = self._zero()
        coords = tuple(_evaluate(structure_polynomial(self.p, "mul", n), self.coords, other.coords, z)
                       for n in range(self.N))
        return WittVector(self.p, coords, self.M)

    def __neg__(self) -> WittVector:
        return self * witt_of_integer(-1, self.p, self.N, self.M)

    def __sub__(self, other: WittVector) -> WittVector:
        return self + (-other)

    def __pow__(self, n: int) -> WittVector:
        result = witt_of_integer(1, self.p, self.N, self.M)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def truncate(self, N: int) -> WittVector:
        return WittVector(self.p, self.coords[:N], self.M)

    def digits(self) -> tuple[PerfectElement, ...]:
        """Teichmüller digits ``zbar_n = x_n^{1/p^n}``."""
        return tuple(c.frobenius(-n) for n, c in enumerate(self.coords))

    def frobenius(self, k: int = 1) -> WittVector:
        return WittVector(self.p, tuple(c.frobenius(k) for c in self.coords), self.M)

    def verschiebung(self) -> WittVector:
        """Shift ``(x_0, ..., x_{N-2}) -> (0, x_0, ..., x_{N-2})``."""
        return WittVector(self.p, (self._zero(),) + self.coords[:-1], self.M)

    def to_json(self) -> dict:
        return {"p": self.p, "M": None if self.M is None else format_fraction(self.M),
                "coords": [c.to_json() for c in self.coords]}

    @classmethod
    def from_json(cls, obj: dict) -> WittVector:
        p = int(obj["p"])
        M = obj.get("M")
        M = None if M is None else Fraction(M)
        return cls(p, tuple(PerfectElement.from_json(p, c, M) for c in obj["coords"]), M)


def from_digits(p: int, digits: Sequence[PerfectElement], M=None) -> WittVector:
    return WittVector(p, tuple(d.frobenius(n) for n, d in enumerate(digits)), M)


def teichmuller(x: PerfectElement, N: int) -> WittVector:
    z = PerfectElement.zero(x.p, x.M)
    return WittVector(x.p, (x,) + (z,) * (N - 1), x.M)


@functools.lru_cache(maxsize=None)
def _integer_coords(n: int, p: int, N: int) -> tuple[int, ...]:
    # ghost components of an integer are (n, n, n, ...)
    coords: list[int] = []
    for k in range(N):
        acc = n - sum(p ** i * coords[i] ** (p ** (k - i)) for i in range(k))
        if acc % p ** k:
            raise ArithmeticError("integer Witt coordinates not integral")
        coords.append(acc // p ** k)
    return tuple(c % p for c in coords)


def witt_of_integer(n: int, p: int, N: int, M=None) -> WittVector:
    return WittVector(p, tuple(PerfectElement.monomial(p, 0, c, M) for c in _integer_coords(n, p, N)), M)


def witt_p(p: int, N: int, M=None) -> WittVector:
    return witt_of_integer(p, p, N, M)


# -- ghost-component oracle -------------------------------------------------------

def _ghost(coords: Sequence[PerfectElement], p: int) -> list[PerfectElement]:
    out = []
    for n in range(len(coords)):
        acc = coords[0]._new({})
        for i in range(n + 1):
            acc = acc + (coords[i] ** (p ** (n - i))) * (p ** i)
        out.append(acc)
    return out


def _from_ghost(ghost: Sequence[PerfectElement], p: int) -> list[PerfectElement]:
    coords: list[PerfectElement] = []
    for n, w in enumerate(ghost):
        acc = w
        for i in range(n):
            acc = acc - (coords[i] ** (p ** (n - i))) * (p ** i)
        coords.append(acc.exact_div(p ** n))
    return coords


def _ghost_op(x: WittVector, y: WittVector, op) -> WittVector:
    if x.p != y.p or x.N != y.N or x.M != y.M:
        raise PrecisionMismatch("oracle inputs differ in shape")
    p = x.p
    gx = _ghost([c.lift() for c in x.coords], p)
    gy = _ghost([c.lift() for c in y.coords], p)
    coords = _from_ghost([op(a, b) for a, b in zip(gx, gy)], p)
    return WittVector(p, tuple(c.reduce() for c in coords), x.M)


def ghost_add(x: WittVector, y: WittVector) -> WittVector:
    """Sum computed through ghost components of integer lifts."""
    return _ghost_op(x, y, lambda a, b: a + b)


def ghost_mul(x: WittVector, y: WittVector) -> WittVector:
    return _ghost_op(x, y, lambda a, b: a * b)


# -- primitive elements and the untilt ---------------------------------------------

@dataclass(frozen=True)
class PrimitiveReport:
    nonzero: bool
    small: bool
    controlled_inverse: bool
    unit_digit: bool

    @property
    def ok(self) -> bool:
        return self.nonzero and self.small and self.controlled_inverse and self.unit_digit

    def to_json(self) -> dict:
        return {"primitive": self.ok, "zbar0_nonzero": self.nonzero, "zbar0_small": self.small,
                "zbar0_inverse_bounded": self.controlled_inverse, "zbar1_unit": self.unit_digit}


def check_primitive_degree_one(z: WittVector) -> PrimitiveReport:
    """``zbar_0`` nonzero with ``|zbar_0| <= 1/p`` and ``|zbar_0^-1| <= p``; ``|zbar_1| = 1``."""
    if z.N < 2:
        raise ValueError("need length at least 2")
    d0, d1 = z.digits()[:2]
    p = z.p
    inv_p = Magnitude.ppow(-1, p)
    n0 = d0.norm()
    nonzero = n0 is not None
    small = nonzero and n0 <= inv_p
    controlled = nonzero and n0.inverse() <= Magnitude.ppow(1, p)
    n1 = d1.norm()
    unit = n1 is not None and n1 == Magnitude.one(p)
    return PrimitiveReport(nonzero, bool(small), bool(controlled), unit)


def standard_primitive(p: int, N: int) -> WittVector:
    """``z = p - [t]``."""
    return witt_p(p, N) - teichmuller(PerfectElement.monomial(p, 1), N)


def _require_exact(*xs: WittVector):
    for x in xs:
        if x.M is not None:
            raise PrecisionMismatch("division by z needs exact (untruncated) Witt vectors")


def divide_by_z(y: WittVector, z: WittVector) -> WittVector:
    """``q`` with ``y = z q`` in ``W_N(R^+)``, or NotDivisible at the failing digit.

    Solve ``y_0 = zbar_0 q_0``, subtract ``z [q_0]`` to clear the first
    coordinate, and write the rest as ``V(w) = p F^-1(w)``; then
    ``q = [q_0] + p q''`` with ``z q'' = F^-1(w)`` one step shorter.
    """
    _require_exact(y, z)
    if z.N < y.N:
        raise PrecisionMismatch("z is shorter than y")
    q = _divide(y, z.truncate(y.N), 0)
    if z.truncate(y.N) * q != y:
        raise ArithmeticError("division check failed")
    return q


def _divide(y: WittVector, z: WittVector, depth: int) -> WittVector:
    p, N = y.p, y.N
    z0 = z.coords[0]
    if not z0.is_monomial():
        raise ValueError("only monomial zbar_0 is supported")
    q0 = y.coords[0].divide_monomial(z0)
    if q0 is None:
        raise NotDivisible(depth)
    tq0 = teichmuller(q0, N)
    r = y - z * tq0
    assert r.coords[0].is_zero()
    if N == 1:
        return tq0
    w = WittVector(p, r.coords[1:], None).frobenius(-1)
    q2 = _divide(w, z.truncate(N - 1), depth + 1)
    # p * q2 = V(F(q2)), lifted back to length N
    pq2 = WittVector(p, (PerfectElement.zero(p),) + q2.frobenius(1).coords, None)
    return tq0 + pq2


def theta_equal(y1: WittVector, y2: WittVector, z: WittVector) -> bool:
    """Whether ``y1`` and ``y2`` agree in ``W(R^+)/(z)`` at this length."""
    try:
        divide_by_z(y1 - y2, z)
    except NotDivisible:
        return False
    return True


@dataclass
class TiltSum:
    components: list
    stable: list

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components],
                "stable": self.stable}


def check_compatible(xs: Sequence[WittVector], z: WittVector):
    for n in range(len(xs) - 1):
        if not theta_equal(xs[n + 1] ** z.p, xs[n], z):
            raise NotCompatible(n)


def tilt_add(xs: Sequence[WittVector], ys: Sequence[WittVector], z: WittVector,
             depth: int, strict: bool = False) -> TiltSum:
    """Components ``(x_{m+n} + y_{m+n})^{p^m}`` with ``m = depth - n``.

    ``stable[n]`` says whether taking ``m - 1`` instead gives the same
    element mod ``z`` (None when ``m = 0``).  With ``strict`` an unsettled
    component raises Unstable.
    """
    if len(xs) <= depth or len(ys) <= depth:
        raise ValueError(f"sequences need at least {depth + 1} terms")
    check_compatible(xs, z)
    check_compatible(ys, z)
    p = z.p
    comps, stable = [], []
    for n in range(depth + 1):
        m = depth - n
        c = (xs[m + n] + ys[m + n]) ** (p ** m)
        comps.append(c)
        if m == 0:
            stable.append(None)
            continue
        prev = (xs[m - 1 + n] + ys[m - 1 + n]) ** (p ** (m - 1))
        ok = theta_equal(c, prev, z)
        stable.append(ok)
        if strict and not ok:
            raise Unstable(n)
    return TiltSum(comps, stable)


def teichmuller_system(x: PerfectElement, length: int, N: int) -> list[WittVector]:
    """``([x], [x^{1/p}], [x^{1/p^2}], ...)``, a compatible sequence of ``p``-th roots."""
    return [teichmuller(x.frobenius(-n), N) for n in range(length)]


def random_perfect(p: int, rng, max_terms: int = 2, max_den_power: int = 2, M=None) -> PerfectElement:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = Fraction(rng.randint(0, 6), p ** rng.randint(0, max_den_power))
        terms[e] = rng.randrange(1, p)
    return PerfectElement(p, terms, M)


def random_witt(p: int, N: int, rng, M=None, **kw) -> WittVector:
    return WittVector(p, tuple(random_perfect(p, rng, M=M, **kw) for _ in range(N)), M)
