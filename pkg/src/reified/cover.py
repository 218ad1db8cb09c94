"""Standard rational and Laurent coverings of the disc and their refinements."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from reified.disc import (
    BaseField,
    DiscPoint,
    GaussPoint,
    RationalSubspace,
    Type1Point,
    laurent_piece,
    member,
    random_point,
    unit_ideal_check,
    weierstrass,
)
from reified.errors import (
    InternalCheck,
    NotACoverOnWitnesses,
    NotAUnit,
    PreconditionViolated,
    UnitIdealFailure,
)
from reified.poly import Poly
from reified.values import Magnitude, Value, value_max


class StandardRationalCovering:
    """Pieces ``U_i = {q_j v(f_j) <= q_i v(f_i) for all j}`` (with ``v(f_i) != 0``)."""

    def __init__(self, K: BaseField, params: Sequence[Poly], scales: Sequence[Magnitude],
                 check: bool = True):
        if len(params) != len(scales) or not params:
            raise ValueError("need the same positive number of parameters and scales")
        self.K = K
        self.params = tuple(params)
        self.scales = tuple(scales)
        if check and not unit_ideal_check(K, self.params):
            raise UnitIdealFailure(f"parameters {list(self.params)} do not generate the unit ideal")

    def __len__(self):
        return len(self.params)

    def piece(self, i: int) -> RationalSubspace:
        qi = self.scales[i]
        return RationalSubspace(self.K, self.params[i], self.params,
                                [qi / qj for qj in self.scales], check=False)

    def pieces_containing(self, x: DiscPoint) -> list[int]:
        weighted = [x.evaluate(f) * q for f, q in zip(self.params, self.scales)]
        top = value_max(weighted)
        if top.is_zero:
            return []
        return [i for i, w in enumerate(weighted) if w == top]

    def to_json(self) -> dict:
        return {"params": [f.to_json() for f in self.params],
                "scales": [q.to_json() for q in self.scales]}


@dataclass(frozen=True)
class RefinedPiece:
    poly: Poly
    weight: Magnitude
    contained_in: tuple[int, ...]


@dataclass
class Refinement:
    covering: StandardRationalCovering
    pieces: list[RefinedPiece]
    checked: int = 0

    def to_json(self) -> dict:
        return {"covering": self.covering.to_json(),
                "contained_in": [list(p.contained_in) for p in self.pieces],
                "witnesses_checked": self.checked}


def refine_to_standard_rational(K: BaseField, cover: Sequence[RationalSubspace],
                                witnesses: Sequence[DiscPoint]) -> Refinement:
    """Standard rational covering refining ``cover``, checked on ``witnesses``.

    With ``U_i = {v(f_ij) <= q_ij v(f_i0)}`` and ``q_i0 = 1``, every product
    ``s = s_1 ... s_n`` (``s_i`` one of the ``f_ij``) that uses some
    ``f_i0`` becomes a parameter with weight ``1 / prod q``; the piece of
    ``s`` lies in every ``U_i`` whose ``f_i0`` was used.
    """
    if not cover:
        raise ValueError("empty cover")
    for x in witnesses:
        if not any(member(x, U) for U in cover):
            raise NotACoverOnWitnesses(x)
    one = K.one()
    choices = [list(zip([U.f0, *U.params], [one, *U.scales])) for U in cover]
    merged: dict[tuple[Poly, Magnitude], set[int]] = {}
    order: list[tuple[Poly, Magnitude]] = []
    for pick in itertools.product(*(range(len(c)) for c in choices)):
        used = {i for i, j in enumerate(pick) if j == 0}
        if not used:
            continue
        s = Poly.const(1)
        Q = one
        for i, j in enumerate(pick):
            f, q = choices[i][j]
            s = s * f
            Q = Q * q
        key = (s, Q.inverse())
        if key not in merged:
            merged[key] = set()
            order.append(key)
        merged[key] |= used
    params = [k[0] for k in order]
    weights = [k[1] for k in order]
    covering = StandardRationalCovering(K, params, weights)
    pieces = [RefinedPiece(s, w, tuple(sorted(merged[(s, w)]))) for s, w in order]
    for x in witnesses:
        hits = covering.pieces_containing(x)
        if not hits:
            raise InternalCheck(f"witness {x!r} lies in no refined piece")
        for k in hits:
            for i in pieces[k].contained_in:
                if not member(x, cover[i]):
                    raise InternalCheck(f"refined piece {k} is not inside input piece {i} at {x!r}")
    return Refinement(covering, pieces, len(witnesses))


# -- Laurent constant ---------------------------------------------------------

def rational_roots(f: Poly) -> list[tuple[Fraction, int]]:
    """Roots of a polynomial that splits over Q; PreconditionViolated otherwise."""
    if f.is_constant():
        return []
    T = sympy.Symbol("T")
    sp = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)], T,
                    domain=sympy.QQ)
    _, factors = sp.factor_list()
    out = []
    for g, mult in factors:
        if g.degree() != 1:
            raise PreconditionViolated(f"{f!r} does not split over the rationals")
        a, b = g.all_coeffs()
        r = -sympy.Rational(b) / sympy.Rational(a)
        out.append((Fraction(int(r.p), int(r.q)), int(mult)))
    return sorted(out)


@dataclass(frozen=True)
class LaurentConstant:
    value: Magnitude
    argmin: DiscPoint

    def to_json(self) -> dict:
        return {"value": self.value.to_json(), "argmin": self.argmin.to_json()}


def _weighted_max(x: DiscPoint, fs, qs) -> Magnitude:
    top = value_max(x.evaluate(f) * q for f, q in zip(fs, qs))
    return top.real_part()


def laurent_constant(K: BaseField, fs: Sequence[Poly], qs: Sequence[Magnitude],
                     guard_samples: int = 200, seed: int = 0) -> LaurentConstant:
    """Exact ``min over the disc of max_i q_i |f_i|``.

    Every ``|f_i|`` is constant off the skeleton spanned by the roots in
    the disc and the Gauss point, and along each skeleton edge every
    ``q_i |f_i|`` is a monomial ``C rho^k``.  The minimum of the max is
    therefore attained at an edge endpoint or where two monomials cross.
    """
    if len(fs) != len(qs) or not fs:
        raise ValueError("need the same positive number of parameters and scales")
    if any(f.is_zero() for f in fs):
        raise PreconditionViolated("zero parameter")
    if any(q.c != 1 for q in qs):
        raise PreconditionViolated("scales must be powers of p")
    if not unit_ideal_check(K, fs):
        raise PreconditionViolated("parameters have a common zero in the disc; the constant is 0")
    roots = [rational_roots(f) for f in fs]
    one = K.one()
    centres = sorted({r for rs in roots for r, _ in rs if K.norm(r) is None or K.norm(r) <= one})

    best: tuple[Magnitude, DiscPoint, Magnitude | None] | None = None

    def consider(pt: DiscPoint, rho: Magnitude | None):
        nonlocal best
        m = _weighted_max(pt, fs, qs)
        if best is None or m < best[0]:
            best = (m, pt, rho)
        elif m == best[0] and rho is not None and (best[2] is None or rho > best[2]):
            best = (m, pt, rho)

    if not centres:
        consider(GaussPoint(K, Fraction(0), one), one)
    for a in centres:
        dists = {K.norm(a - r) for rs in roots for r, _ in rs}
        breaks = sorted({d for d in dists if d is not None and d <= one} | {one})
        consider(Type1Point(K, a), None)
        lo = None
        for hi in breaks:
            consider(GaussPoint(K, a, hi), hi)
            # monomial data on (lo, hi): roots with |a - r| <= lo are inside
            lo_key = lo
            coef, expo = [], []
            for f, q, rs in zip(fs, qs, roots):
                C = q * K.norm(f.lc())
                k = 0
                for r, mult in rs:
                    d = K.norm(a - r)
                    if d is None or (lo_key is not None and d <= lo_key):
                        k += mult
                    else:
                        C = C * d ** mult
                coef.append(C)
                expo.append(k)
            for i, j in itertools.combinations(range(len(fs)), 2):
                if expo[i] == expo[j]:
                    continue
                if expo[i] < expo[j]:
                    i, j = j, i
                try:
                    rho = (coef[j] / coef[i]).root(expo[i] - expo[j])
                except ValueError:
                    continue
                if (lo is None or rho > lo) and rho < hi:
                    consider(GaussPoint(K, a, rho), rho)
            lo = hi
    value, argmin, _ = best
    rng = random.Random(seed)
    for _ in range(guard_samples):
        x = random_point(K, rng, kinds=("type1", "gauss"))
        if _weighted_max(x, fs, qs) < value:
            raise InternalCheck(f"sample {x!r} beats the computed minimum {value!r}")
    return LaurentConstant(value, argmin)


# -- Laurent coverings --------------------------------------------------------

@dataclass(frozen=True)
class Ratio:
    """The function ``num / den`` on points where ``den`` does not vanish."""

    num: Poly
    den: Poly

    def evaluate(self, x: DiscPoint) -> Value:
        return x.evaluate(self.num) / x.evaluate(self.den)

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def _eval_param(x: DiscPoint, f) -> Value:
    return f.evaluate(x) if isinstance(f, Ratio) else x.evaluate(f)


class StandardLaurentCovering:
    """Pieces ``S_e`` for sign vectors ``e``: ``v(f_i) <= q_i`` for ``-``, ``>= q_i`` for ``+``."""

    def __init__(self, params: Sequence, scales: Sequence[Magnitude]):
        if len(params) != len(scales):
            raise ValueError("need one scale per parameter")
        self.params = tuple(params)
        self.scales = tuple(scales)

    def __len__(self):
        return len(self.params)

    def sign_vectors(self) -> list[tuple[str, ...]]:
        return list(itertools.product("-+", repeat=len(self.params)))

    def member(self, x: DiscPoint, signs: Sequence[str]) -> bool:
        for f, q, s in zip(self.params, self.scales, signs):
            v = _eval_param(x, f)
            w = Value.real(q)
            if s == "-" and w < v:
                return False
            if s == "+" and v < w:
                return False
        return True

    def signs_of(self, x: DiscPoint) -> list[tuple[str, ...]]:
        return [e for e in self.sign_vectors() if self.member(x, e)]

    def to_json(self) -> dict:
        return {"params": [f.to_json() for f in self.params],
                "scales": [q.to_json() for q in self.scales]}


def simple_laurent_pieces(K: BaseField, q: Magnitude) -> tuple[RationalSubspace, RationalSubspace]:
    """``({v(T) <= q}, {v(T) >= q})``."""
    if not (q <= K.one()):
        raise PreconditionViolated("scale must be at most 1")
    return weierstrass(K, Poly.T(), q), laurent_piece(K, Poly.T(), q)


@dataclass(frozen=True)
class LaurentPiece:
    signs: tuple[str, ...]
    plus: tuple[int, ...]
    empty: bool
    empty_intersections: tuple[int, ...]

    def to_json(self) -> dict:
        return {"signs": "".join(self.signs), "plus": list(self.plus), "empty": self.empty,
                "empty_intersections": list(self.empty_intersections)}


@dataclass
class LaurentRefinement:
    constant: LaurentConstant
    laurent: StandardLaurentCovering
    pieces: list[LaurentPiece] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"constant": self.constant.to_json(), "laurent": self.laurent.to_json(),
                "pieces": [p.to_json() for p in self.pieces]}


def laurent_refinement(cov: StandardRationalCovering) -> LaurentRefinement:
    """Laurent covering by ``q_i v(f_i) <= c/2`` / ``>= c/2`` and the per-piece restrictions.

    On a piece with sign set ``P`` the indices outside ``P`` satisfy
    ``q_i v(f_i) <= c/2 < max``, so only ``U_i`` with ``i`` in ``P`` meet it
    and the restriction is the standard rational covering by those ``f_i``.
    """
    const = laurent_constant(cov.K, cov.params, cov.scales)
    half = const.value / 2
    scales = [half / q for q in cov.scales]
    laurent = StandardLaurentCovering(cov.params, scales)
    pieces = []
    for e in laurent.sign_vectors():
        plus = tuple(i for i, s in enumerate(e) if s == "+")
        minus = tuple(i for i, s in enumerate(e) if s == "-")
        pieces.append(LaurentPiece(e, plus, not plus, minus))
    return LaurentRefinement(const, laurent, pieces)


def restricted_covering(cov: StandardRationalCovering, piece: LaurentPiece) -> StandardRationalCovering | None:
    """The covering of the Laurent piece by the ``U_i`` with ``i`` in ``P``.

    On the piece each ``f_i`` with ``i`` in ``P`` is bounded below, so the
    unit-ideal condition holds there even when it fails on the whole disc.
    """
    if piece.empty:
        return None
    return StandardRationalCovering(cov.K, [cov.params[i] for i in piece.plus],
                                    [cov.scales[i] for i in piece.plus], check=False)


def check_laurent_refinement(cov: StandardRationalCovering, ref: LaurentRefinement,
                             witnesses: Sequence[DiscPoint]) -> int:
    """Each witness: its Laurent pieces are nonempty and only meet ``U_i`` with ``i`` in ``P``."""
    by_signs = {p.signs: p for p in ref.pieces}
    for x in witnesses:
        sv = ref.laurent.signs_of(x)
        if not sv:
            raise InternalCheck(f"witness {x!r} lies in no Laurent piece")
        hits = cov.pieces_containing(x)
        for e in sv:
            p = by_signs[e]
            if p.empty or any(i not in p.plus for i in hits):
                raise InternalCheck(f"witness {x!r} contradicts Laurent piece {''.join(e)}")
    return len(witnesses)


@dataclass
class UnitsToLaurent:
    laurent: StandardLaurentCovering
    pairs: list[tuple[int, int]]
    kings: dict

    def to_json(self) -> dict:
        return {"laurent": self.laurent.to_json(), "pairs": [list(p) for p in self.pairs],
                "pieces": [{"signs": "".join(e), "inside": k} for e, k in sorted(self.kings.items())]}


def units_to_laurent(cov: StandardRationalCovering,
                     witnesses: Sequence[DiscPoint] = ()) -> UnitsToLaurent:
    """Laurent covering by the ratios ``f_i / f_j`` (``i < j``) refining ``cov``.

    The piece ``-`` of the pair ``(i, j)`` is ``q_i v(f_i) <= q_j v(f_j)``.
    A sign vector is a tournament on the indices; its piece lies in ``U_k``
    for any ``k`` from which every index is reachable.
    """
    for i, f in enumerate(cov.params):
        if not unit_ideal_check(cov.K, [f]):
            raise NotAUnit(i)
    n = len(cov.params)
    pairs = list(itertools.combinations(range(n), 2))
    params = [Ratio(cov.params[i], cov.params[j]) for i, j in pairs]
    scales = [cov.scales[j] / cov.scales[i] for i, j in pairs]
    laurent = StandardLaurentCovering(params, scales)
    kings = {}
    for e in laurent.sign_vectors():
        beats = {i: set() for i in range(n)}
        for (i, j), s in zip(pairs, e):
            if s == "+":
                beats[i].add(j)
            else:
                beats[j].add(i)
        kings[e] = _king(beats)
    for x in witnesses:
        sv = laurent.signs_of(x)
        if not sv:
            raise InternalCheck(f"witness {x!r} lies in no Laurent piece")
        for e in sv:
            if not member(x, cov.piece(kings[e])):
                raise InternalCheck(f"witness {x!r} in piece {''.join(e)} but outside U_{kings[e]}")
    return UnitsToLaurent(laurent, pairs, kings)


def _king(beats: dict[int, set[int]]) -> int:
    n = len(beats)
    for k in range(n):
        seen = {k}
        stack = [k]
        while stack:
            for j in beats[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        if len(seen) == n:
            return k
    raise InternalCheck("tournament without a king")
