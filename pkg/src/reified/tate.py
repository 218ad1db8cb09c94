"""Weighted Tate series, the Laurent splitting, Čech checks and glueing.

The simple Laurent covering of the disc by ``|T| <= q`` and ``|T| >= q``
gives the rings

* ``A   = K{T}``                        (the disc),
* ``B1  = K{T/q}``                      (the small disc),
* ``B2  = K{T, U/q^-1}/(TU - 1)``       (the annulus ``q <= |T| <= 1``),
* ``B12 = K{T/q, U/q^-1}/(TU - 1)``     (the circle ``|T| = q``).

Elements of the last three are handled through their Laurent normal form,
a dict ``n -> coefficient`` with ``U`` replaced by ``T^-1``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from reified.disc import BaseField
from reified.errors import ExactnessFailure, IncompatiblePair, NoConvergence
from reified.values import Magnitude, format_fraction

Laurent = dict  # n -> Fraction


def _max(a: Magnitude | None, b: Magnitude | None) -> Magnitude | None:
    if a is None:
        return b
    if b is None:
        return a
    return a if a >= b else b


def _lt(a: Magnitude | None, b: Magnitude | None) -> bool:
    """``a < b`` with None standing for 0."""
    if b is None:
        return False
    return a is None or a < b


class WeightedTateSeries:
    """Finite part of a series in ``T_1..T_n`` with radii, plus a bound on the tail."""

    def __init__(self, K: BaseField, radii: Sequence[Magnitude], terms: dict, err: Magnitude | None = None):
        self.K = K
        self.radii = tuple(radii)
        n = len(self.radii)
        clean = {}
        for idx, c in terms.items():
            idx = tuple(int(e) for e in idx) if not isinstance(idx, int) else (idx,)
            if len(idx) != n or any(e < 0 for e in idx):
                raise ValueError(f"bad exponent {idx} for {n} variables")
            c = Fraction(c)
            if c:
                clean[idx] = clean.get(idx, Fraction(0)) + c
        self.terms = {k: v for k, v in sorted(clean.items()) if v}
        self.err = err

    def term_norm(self, idx) -> Magnitude | None:
        m = self.K.norm(self.terms[idx])
        for r, e in zip(self.radii, idx):
            m = m * r ** e
        return m

    def stored_norm(self) -> Magnitude | None:
        out = None
        for idx in self.terms:
            out = _max(out, self.term_norm(idx))
        return out

    def __mul__(self, other: WeightedTateSeries) -> WeightedTateSeries:
        if self.radii != other.radii:
            raise ValueError("radii differ")
        terms: dict = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                k = tuple(i + j for i, j in zip(a, b))
                terms[k] = terms.get(k, Fraction(0)) + x * y
        na, nb = self.stored_norm(), other.stored_norm()
        err = None
        for u, v in ((na, other.err), (nb, self.err), (self.err, other.err)):
            if u is not None and v is not None:
                err = _max(err, u * v)
        return WeightedTateSeries(self.K, self.radii, terms, err)

    def to_json(self) -> dict:
        return {"radii": [r.to_json() for r in self.radii],
                "terms": {",".join(map(str, k)): format_fraction(v) for k, v in self.terms.items()},
                "err": None if self.err is None else self.err.to_json()}

    @classmethod
    def from_json(cls, K: BaseField, obj: dict) -> WeightedTateSeries:
        radii = [Magnitude.from_json(r, K.p) for r in obj["radii"]]
        terms = {}
        for k, v in obj.get("terms", {}).items():
            idx = tuple(int(e) for e in str(k).split(",")) if str(k) else ()
            terms[idx] = Fraction(v)
        err = obj.get("err")
        return cls(K, radii, terms, None if err is None else Magnitude.from_json(err, K.p))


@dataclass(frozen=True)
class NormReport:
    norm: Magnitude | None
    err: Magnitude | None
    certified: bool

    def to_json(self) -> dict:
        return {"norm": None if self.norm is None else self.norm.to_json(),
                "err": None if self.err is None else self.err.to_json(),
                "certified": self.certified}


def gauss_norm(s: WeightedTateSeries) -> NormReport:
    """Norm of the stored terms; certified when the tail cannot reach it."""
    n = s.stored_norm()
    return NormReport(n, s.err, s.err is None or _lt(s.err, n))


# -- Laurent normal forms -----------------------------------------------------

def laurent_clean(a: dict) -> Laurent:
    return {n: Fraction(c) for n, c in sorted(a.items()) if c}


def normal_form(b: dict) -> Laurent:
    """Substitute ``U = T^-1`` in a bivariate dict ``(i, j) -> coefficient``."""
    out: dict[int, Fraction] = {}
    for (i, j), c in b.items():
        out[i - j] = out.get(i - j, Fraction(0)) + Fraction(c)
    return laurent_clean(out)


def laurent_add(a: Laurent, b: Laurent, sign: int = 1) -> Laurent:
    out = dict(a)
    for n, c in b.items():
        out[n] = out.get(n, Fraction(0)) + sign * c
    return laurent_clean(out)


def laurent_mul(a: Laurent, b: Laurent) -> Laurent:
    out: dict[int, Fraction] = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, Fraction(0)) + x * y
    return laurent_clean(out)


def circle_norm(K: BaseField, q: Magnitude, a: Laurent) -> Magnitude | None:
    """Norm in ``B12``: ``max |c_n| q^n``."""
    out = None
    for n, c in a.items():
        out = _max(out, K.norm(c) * q ** n)
    return out


def disc_norm(K: BaseField, a: Laurent) -> Magnitude | None:
    """Norm in ``A``: ``max |c_n|`` (nonnegative exponents only)."""
    out = None
    for n, c in a.items():
        if n < 0:
            raise ValueError("negative exponent in a disc element")
        out = _max(out, K.norm(c))
    return out


def annulus_norm(K: BaseField, q: Magnitude, a: Laurent) -> Magnitude | None:
    """Norm in ``B2``: ``max |c_n| max(1, q^n)``."""
    one = K.one()
    out = None
    for n, c in a.items():
        out = _max(out, K.norm(c) * _max(one, q ** n))
    return out


def bivariate_norm(K: BaseField, q: Magnitude, b: dict) -> Magnitude | None:
    out = None
    for (i, j), c in b.items():
        if c:
            out = _max(out, K.norm(c) * q ** (i - j))
    return out


@dataclass(frozen=True)
class Split:
    b1: Laurent  # series in T
    b2: Laurent  # series in U, keyed by the power of U
    residual: Laurent

    def b2_in_T(self) -> Laurent:
        return {-n: c for n, c in self.b2.items()}

    def to_json(self) -> dict:
        return {"b1": {str(n): format_fraction(c) for n, c in self.b1.items()},
                "b2": {str(n): format_fraction(c) for n, c in self.b2.items()},
                "residual": {str(n): format_fraction(c) for n, c in self.residual.items()}}


def laurent_split(b: dict) -> Split:
    """Split a bivariate representative into ``b1(T) - b2(U)``.

    With ``a'_n`` the sum of ``a_ij`` over ``i - j = n``: ``b1 = sum_{n>=0} a'_n T^n``
    and ``b2 = -sum_{n>=1} a'_{-n} U^n``.  The residual is the normal form
    of ``b1 - b2 - b`` and is empty on success.
    """
    nf = normal_form(b)
    b1 = {n: c for n, c in nf.items() if n >= 0}
    b2 = {-n: -c for n, c in nf.items() if n < 0}
    diff = laurent_add(b1, {-n: c for n, c in b2.items()}, -1)
    residual = laurent_add(diff, nf, -1)
    return Split(b1, b2, residual)


def glue_sections(q: Magnitude, b1: Laurent, b2: Laurent) -> Laurent:
    """The element of ``A`` restricting to ``b1`` on ``B1`` and ``b2`` on ``B2``.

    ``b1`` has only nonnegative powers of ``T``; ``b2`` is a Laurent normal
    form.  Raises IncompatiblePair, carrying the difference on the circle,
    when the two disagree on ``B12``.
    """
    if any(n < 0 for n in b1):
        raise ValueError("b1 must be a power series in T")
    b1, b2 = laurent_clean(b1), laurent_clean(b2)
    diff = laurent_add(b1, b2, -1)
    if diff:
        raise IncompatiblePair(diff)
    return b1


def random_laurent(K: BaseField, rng: random.Random, lo: int = -3, hi: int = 3) -> dict:
    b = {}
    for _ in range(rng.randint(1, 6)):
        i, j = rng.randint(0, max(hi, 0)), rng.randint(0, max(-lo, 0))
        num = rng.randint(-9, 9) * K.p ** rng.randint(0, 2)
        b[i, j] = b.get((i, j), Fraction(0)) + Fraction(num, rng.choice([1, 1, 3, 5]))
    return {k: v for k, v in b.items() if v}


@dataclass
class CechReport:
    q: Magnitude
    samples: int
    split_residual_terms: int = 0
    norm_checks: int = 0
    recovered: int = 0

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "samples": self.samples,
                "split_residual_terms": self.split_residual_terms,
                "norm_checks": self.norm_checks, "recovered": self.recovered}


def cech_check(K: BaseField, q: Magnitude, precision: Magnitude | None = None,
               samples: int = 50, seed: int = 0) -> CechReport:
    """Exactness of ``0 -> A -> B1 (+) B2 -> B12 -> 0`` on random elements."""
    if not (q <= K.one()):
        raise ValueError("q must be at most 1")
    rng = random.Random(seed)
    rep = CechReport(q, samples)
    for _ in range(samples):
        # (i) A embeds isometrically into B1 (+) B2
        a = {n: c for n, c in normal_form(random_laurent(K, rng, 0, 4)).items()}
        na = disc_norm(K, a)
        if na != _max(circle_norm(K, q, a), annulus_norm(K, q, a)):
            raise ExactnessFailure("restriction to the covering is not isometric", a)
        rep.norm_checks += 1
        # (ii) every element of B12 is a difference, with norm control
        b = random_laurent(K, rng)
        sp = laurent_split(b)
        if sp.residual:
            limit = precision
            big = circle_norm(K, q, sp.residual)
            if limit is None or _lt(limit, big):
                raise ExactnessFailure("Laurent split leaves a residual", b)
        rep.split_residual_terms += len(sp.residual)
        nb = bivariate_norm(K, q, b)
        if _lt(nb, circle_norm(K, q, sp.b1)) or _lt(nb, annulus_norm(K, q, sp.b2_in_T())):
            raise ExactnessFailure("Laurent split increases the norm", b)
        rep.norm_checks += 1
        # (iii) compatible pairs glue back to the element of A; the annulus
        # side is handed over as a different representative modulo TU - 1
        shifted = {(n, 0): c for n, c in a.items()}
        for (i, j), c in random_laurent(K, rng, -2, 2).items():
            for key, s in (((i + 1, j + 1), 1), ((i, j), -1)):
                shifted[key] = shifted.get(key, Fraction(0)) + s * c
        if glue_sections(q, a, normal_form(shifted)) != a:
            raise ExactnessFailure("glued section differs from the original", a)
        rep.recovered += 1
    return rep


# -- glueing free modules -----------------------------------------------------

Matrix = list  # list of rows of Laurent dicts


def identity(n: int) -> Matrix:
    return [[{0: Fraction(1)} if i == j else {} for j in range(n)] for i in range(n)]


def mat_add(A: Matrix, B: Matrix, sign: int = 1) -> Matrix:
    return [[laurent_add(a, b, sign) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc: Laurent = {}
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = laurent_add(acc, laurent_mul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def mat_norm(K: BaseField, q: Magnitude, A: Matrix) -> Magnitude | None:
    out = None
    for row in A:
        for a in row:
            out = _max(out, circle_norm(K, q, a))
    return out


def _round_padic(c: Fraction, p: int, N: int) -> Fraction:
    """A small-height rational congruent to ``c`` modulo ``p^N``."""
    num, den, v = c.numerator, c.denominator, 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    if v >= N:
        return Fraction(0)
    m = p ** (N - v)
    r = num * pow(den, -1, m) % m
    if 2 * r > m:
        r -= m
    return Fraction(r) * Fraction(p) ** v


def mat_prune(K: BaseField, q: Magnitude, A: Matrix, floor: Magnitude) -> Matrix:
    """Drop terms whose circle norm is below ``floor``.

    In p-adic mode the surviving coefficients are also rounded modulo a
    power of ``p`` fine enough that the change is below ``floor``; this keeps
    the rationals from growing during long iterations.
    """
    precision: dict[int, int] = {}

    def digits(n: int) -> int:
        if n not in precision:
            bound = floor / q ** n
            N = math.floor(-float(bound.e) - math.log(float(bound.c), K.p)) - 1
            while not Magnitude.ppow(-N, K.p) < bound:
                N += 1
            precision[n] = N
        return precision[n]

    out = []
    for row in A:
        new_row = []
        for a in row:
            b = {}
            for n, c in a.items():
                if K.norm(c) * q ** n < floor:
                    continue
                if K.mode == "padic":
                    c = _round_padic(c, K.p, digits(n))
                    if not c:
                        continue
                b[n] = c
            new_row.append(b)
        out.append(new_row)
    return out


@dataclass
class GlueResult:
    M1: Matrix
    M2: Matrix
    residual: Magnitude | None
    iterations: int
    norms: list = field(default_factory=list)

    def to_json(self) -> dict:
        def enc(M):
            return [[{str(n): format_fraction(c) for n, c in a.items()} for a in row] for row in M]
        return {"M1": enc(self.M1), "M2": enc(self.M2),
                "residual": None if self.residual is None else self.residual.to_json(),
                "iterations": self.iterations,
                "norms": [None if m is None else m.to_json() for m in self.norms]}


def glue_free_module(K: BaseField, q: Magnitude, M: Matrix, tol: Magnitude,
                     max_iter: int = 30) -> GlueResult:
    """Factor ``M = M1 M2^-1`` with ``M1`` over ``B1`` and ``M2`` over ``B2``.

    Each step splits ``E = M - I`` as ``E1 - E2`` and replaces ``M`` by
    ``(I + E1)^-1 M (I + E2)``, which squares the norm of ``E``.  Terms
    below ``tol^2`` are discarded along the way; the returned residual
    ``|M M2 - M1|`` is computed exactly from the returned factors.
    """
    n = len(M)
    I = identity(n)
    floor = tol * tol
    M0 = [[laurent_clean(a) for a in row] for row in M]
    cur = M0
    M1, M2 = identity(n), identity(n)
    norms = []
    E = mat_add(cur, I, -1)
    size = mat_norm(K, q, E)
    norms.append(size)
    if size is not None and not size < K.one():
        raise NoConvergence(f"|M - I| = {size!r} is not below 1")
    it = 0
    while size is not None and tol < size:
        if it == max_iter:
            raise NoConvergence(f"|M - I| = {size!r} after {it} iterations")
        E1 = [[{k: c for k, c in a.items() if k >= 0} for a in row] for row in E]
        E2 = [[{k: -c for k, c in a.items() if k < 0} for a in row] for row in E]
        # Neumann series for (I + E1)^-1, stopped once the tail is below tol^2
        e1 = mat_norm(K, q, E1)
        inv, power = I, I
        if e1 is not None:
            k = 0
            bound = K.one()
            while True:
                k += 1
                power = mat_prune(K, q, mat_mul(power, E1), floor)
                inv = mat_add(inv, power, -1 if k % 2 else 1)
                bound = bound * e1
                if k >= 1 and bound * e1 < floor:
                    break
        step1 = mat_add(I, E1)
        step2 = mat_add(I, E2)
        cur = mat_prune(K, q, mat_mul(mat_mul(inv, cur), step2), floor)
        M1 = mat_prune(K, q, mat_mul(M1, step1), floor)
        M2 = mat_prune(K, q, mat_mul(M2, step2), floor)
        E = mat_add(cur, I, -1)
        new = mat_norm(K, q, E)
        if _lt(size * size, new):
            raise ExactnessFailure(f"contraction fails: {new!r} > {size!r}^2")
        size = new
        norms.append(size)
        it += 1
    residual = mat_norm(K, q, mat_add(mat_mul(M0, M2), M1, -1))
    return GlueResult(M1, M2, residual, it, norms)
