"""Finite distributive lattices, their prime-filter spectra and spectralification.

Everything here is exhaustive enumeration; lattices of up to about twenty
elements are handled comfortably.  Element labels are kept as strings and
ordered lexicographically so that every output is reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from reified.errors import NotALattice, NotDistributive, NotInjective, NotSurjective


def _label(x) -> str:
    return x if isinstance(x, str) else str(x)


class FiniteLattice:
    """A bounded lattice with meet and join tables materialised.

    Build one through :func:`validate_lattice`; the constructor trusts its
    arguments.
    """

    def __init__(self, elements, leq, zero, one, meet, join):
        self.elements: tuple[str, ...] = tuple(elements)
        self.leq: frozenset[tuple[str, str]] = frozenset(leq)
        self.zero = zero
        self.one = one
        self.meet: dict[tuple[str, str], str] = meet
        self.join: dict[tuple[str, str], str] = join

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.leq

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteLattice({list(self.elements)})"

    def to_json(self) -> dict:
        pairs = sorted(p for p in self.leq if p[0] != p[1])
        return {"elements": list(self.elements), "leq": [list(p) for p in pairs],
                "zero": self.zero, "one": self.one}


def _closure(elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    rel = {(a, a) for a in elements}
    rel.update(pairs)
    # Warshall
    for k in elements:
        for i in elements:
            if (i, k) in rel:
                for j in elements:
                    if (k, j) in rel:
                        rel.add((i, j))
    return rel


def validate_lattice(elements: Iterable, leq: Iterable, zero, one) -> FiniteLattice:
    """Check the lattice axioms and distributivity; return the validated lattice.

    ``leq`` may be any generating set of pairs; its reflexive-transitive
    closure is taken.
    """
    elems = sorted({_label(e) for e in elements})
    if not elems:
        raise NotALattice("empty element set")
    zero, one = _label(zero), _label(one)
    known = set(elems)
    pairs = [(_label(a), _label(b)) for a, b in leq]
    for a, b in pairs:
        if a not in known or b not in known:
            raise NotALattice(f"relation ({a}, {b}) mentions an unknown element")
    for x in (zero, one):
        if x not in known:
            raise NotALattice(f"bound {x!r} is not an element")
    rel = _closure(elems, pairs)
    for a, b in rel:
        if a != b and (b, a) in rel:
            raise NotALattice(f"antisymmetry fails for {a} and {b}")
    for x in elems:
        if (zero, x) not in rel or (x, one) not in rel:
            raise NotALattice(f"{x} is not between the bounds")

    def bound(a, b, below: bool):
        if below:
            cands = [c for c in elems if (c, a) in rel and (c, b) in rel]
            best = [c for c in cands if all((d, c) in rel for d in cands)]
        else:
            cands = [c for c in elems if (a, c) in rel and (b, c) in rel]
            best = [c for c in cands if all((c, d) in rel for d in cands)]
        if not best:
            kind = "meet" if below else "join"
            raise NotALattice(f"no {kind} for {a} and {b}")
        return best[0]

    meet, join = {}, {}
    for a in elems:
        for b in elems:
            meet[a, b] = bound(a, b, True)
            join[a, b] = bound(a, b, False)
    for x, y, z in itertools.product(elems, repeat=3):
        if meet[x, join[y, z]] != join[meet[x, y], meet[x, z]]:
            raise NotDistributive((x, y, z))
    return FiniteLattice(elems, rel, zero, one, meet, join)


def lattice_from_json(obj: dict) -> FiniteLattice:
    return validate_lattice(obj["elements"], obj.get("leq", []), obj["zero"], obj["one"])


# -- catalog ----------------------------------------------------------------

def chain(n: int) -> FiniteLattice:
    """The chain ``0 < 1 < ... < n-1``."""
    if n < 1:
        raise ValueError("a chain needs at least one element")
    labels = [str(i) for i in range(n)]
    return validate_lattice(labels, zip(labels, labels[1:]), labels[0], labels[-1])


def product(A: FiniteLattice, B: FiniteLattice) -> FiniteLattice:
    elems = [f"{a}.{b}" for a in A.elements for b in B.elements]
    leq = [(f"{a}.{b}", f"{c}.{d}") for a in A.elements for b in B.elements
           for c in A.elements for d in B.elements if A.le(a, c) and B.le(b, d)]
    return validate_lattice(elems, leq, f"{A.zero}.{B.zero}", f"{A.one}.{B.one}")


def boolean(k: int) -> FiniteLattice:
    """Subsets of a ``k``-element set, labelled by bit strings."""
    elems = ["".join(bits) for bits in itertools.product("01", repeat=k)]
    leq = [(a, b) for a in elems for b in elems if all(x <= y for x, y in zip(a, b))]
    return validate_lattice(elems, leq, "0" * k, "1" * k)


def diamond_m3() -> tuple[list, list, str, str]:
    """Raw data of the non-distributive diamond (not validated)."""
    elems = ["0", "a", "b", "c", "1"]
    leq = [("0", x) for x in "abc"] + [(x, "1") for x in "abc"]
    return elems, leq, "0", "1"


def square() -> FiniteLattice:
    """``{0, a, b, 1}`` with ``a`` and ``b`` incomparable."""
    return validate_lattice(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], "0", "1")


# -- filters ----------------------------------------------------------------

def _format_set(members: Iterable[str], order: Sequence[str]) -> str:
    rank = {x: i for i, x in enumerate(order)}
    return "{" + ",".join(sorted(members, key=rank.__getitem__)) + "}"


def _top_down(D: FiniteLattice) -> list[str]:
    height = {x: sum(1 for y in D.elements if D.le(y, x)) for x in D.elements}
    return sorted(D.elements, key=lambda x: (-height[x], x))


def is_prime_filter(D: FiniteLattice, F: frozenset) -> bool:
    if D.one not in F or D.zero in F:
        return False
    for a in F:
        for b in D.elements:
            if D.le(a, b) and b not in F:
                return False
    for a in F:
        for b in F:
            if D.meet[a, b] not in F:
                return False
    for a in D.elements:
        for b in D.elements:
            if D.join[a, b] in F and a not in F and b not in F:
                return False
    return True


def prime_filters(D: FiniteLattice) -> list[frozenset]:
    """All prime filters, sorted by size and then by their formatted members."""
    order = _top_down(D)
    found: list[frozenset] = []
    chosen: list[str] = []

    def rec(i: int):
        if i == len(order):
            F = frozenset(chosen)
            if is_prime_filter(D, F):
                found.append(F)
            return
        x = order[i]
        # every element above x was decided earlier; take x only if all are in
        if x != D.zero and all(y in chosen for y in D.elements if y != x and D.le(x, y)):
            chosen.append(x)
            rec(i + 1)
            chosen.pop()
        if x != D.one:
            rec(i + 1)

    if D.zero != D.one:
        rec(0)
    return sorted(found, key=lambda F: (len(F), _format_set(F, D.elements)))


def prime_filters_oracle(D: FiniteLattice) -> list[frozenset]:
    """Prime filters as principal filters of join-irreducible elements."""
    out = []
    for j in D.elements:
        if j == D.zero:
            continue
        below = [x for x in D.elements if D.le(x, j) and x != j]
        irreducible = not any(D.join[a, b] == j for a in below for b in below)
        if irreducible:
            out.append(frozenset(x for x in D.elements if D.le(j, x)))
    return sorted(out, key=lambda F: (len(F), _format_set(F, D.elements)))


# -- finite spaces ------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSpace:
    points: tuple[str, ...]
    opens: frozenset[frozenset[str]]

    @classmethod
    def generated(cls, points: Iterable, opens: Iterable[Iterable]) -> FiniteSpace:
        """Topology generated by the given sets (closure under unions and intersections)."""
        pts = tuple(sorted({_label(x) for x in points}))
        everything = frozenset(pts)
        fam = {frozenset(), everything}
        for U in opens:
            U = frozenset(_label(x) for x in U)
            if not U <= everything:
                raise ValueError(f"open set {sorted(U)} mentions unknown points")
            fam.add(U)
        changed = True
        while changed:
            changed = False
            current = list(fam)
            for U, V in itertools.combinations(current, 2):
                for W in (U | V, U & V):
                    if W not in fam:
                        fam.add(W)
                        changed = True
        return cls(pts, frozenset(fam))

    def sorted_opens(self) -> list[frozenset]:
        return sorted(self.opens, key=lambda U: (len(U), _format_set(U, self.points)))

    def closure(self, S: Iterable[str]) -> frozenset:
        S = set(S)
        out = frozenset(self.points)
        for U in self.opens:
            if not (U & S):
                out = out - U
        return out

    def closed_sets(self) -> list[frozenset]:
        everything = frozenset(self.points)
        return [everything - U for U in self.opens]

    def is_t0(self) -> bool:
        for x, y in itertools.combinations(self.points, 2):
            if all((x in U) == (y in U) for U in self.opens):
                return False
        return True

    def is_sober(self) -> bool:
        closed = self.closed_sets()
        for C in closed:
            if not C:
                continue
            proper = [D for D in closed if D < C]
            reducible = any(A | B == C for A in proper for B in proper)
            if reducible:
                continue
            generic = [x for x in C if self.closure([x]) == C]
            if len(generic) != 1:
                return False
        return True

    def to_json(self) -> dict:
        return {"points": list(self.points),
                "opens": [sorted(U, key=self.points.index) for U in self.sorted_opens()]}


def space_from_json(obj: dict) -> FiniteSpace:
    return FiniteSpace.generated(obj["points"], obj.get("opens", []))


@dataclass(frozen=True)
class Spectrum:
    """``Spec(D)`` with point labels and the filters they stand for."""

    lattice: FiniteLattice
    filters: tuple[frozenset, ...]
    labels: tuple[str, ...]
    space: FiniteSpace

    def tilde(self, s: str) -> frozenset:
        """The basic open ``{F : s in F}``."""
        return frozenset(lab for lab, F in zip(self.labels, self.filters) if s in F)


def spec_space(D: FiniteLattice) -> Spectrum:
    filters = prime_filters(D)
    labels = [_format_set(F, D.elements) for F in filters]
    basics = [frozenset(lab for lab, F in zip(labels, filters) if s in F) for s in D.elements]
    space = FiniteSpace.generated(labels, basics)
    assert space.is_t0() and space.is_sober()
    return Spectrum(D, tuple(filters), tuple(labels), space)


def patch_sets(X: FiniteSpace) -> list[frozenset]:
    """Boolean algebra generated by the opens: all unions of signature classes."""
    opens = X.sorted_opens()
    classes: dict[tuple, list[str]] = {}
    for x in X.points:
        sig = tuple(x in U for U in opens)
        classes.setdefault(sig, []).append(x)
    atoms = [frozenset(c) for c in classes.values()]
    out = set()
    for bits in itertools.product((0, 1), repeat=len(atoms)):
        out.add(frozenset().union(*(a for a, b in zip(atoms, bits) if b)))
    return sorted(out, key=lambda U: (len(U), _format_set(U, X.points)))


@dataclass(frozen=True)
class StoneWitness:
    spectrum: Spectrum
    mapping: dict

    def to_json(self) -> dict:
        pts = self.spectrum.space.points
        return {"points": list(pts),
                "map": {s: sorted(U, key=pts.index) for s, U in self.mapping.items()}}


def stone_roundtrip(D: FiniteLattice) -> StoneWitness:
    """Verify ``s |-> {F : s in F}`` is a lattice isomorphism onto the opens of Spec(D)."""
    sp = spec_space(D)
    mapping = {s: sp.tilde(s) for s in D.elements}
    seen: dict[frozenset, str] = {}
    for s, U in mapping.items():
        if U in seen:
            raise NotInjective(f"{seen[U]} and {s} have the same open {sorted(U)}")
        seen[U] = s
    missing = [U for U in sp.space.opens if U not in seen]
    if missing:
        raise NotSurjective(f"open {sorted(missing[0])} is not of the form S~")
    if mapping[D.zero] or mapping[D.one] != frozenset(sp.space.points):
        raise NotSurjective("bounds are not preserved")
    for a in D.elements:
        for b in D.elements:
            if mapping[D.meet[a, b]] != mapping[a] & mapping[b]:
                raise NotInjective(f"meet of {a} and {b} not preserved")
            if mapping[D.join[a, b]] != mapping[a] | mapping[b]:
                raise NotSurjective(f"join of {a} and {b} not preserved")
            if D.le(a, b) != (mapping[a] <= mapping[b]):
                raise NotInjective(f"order between {a} and {b} not reflected")
    return StoneWitness(sp, mapping)


@dataclass(frozen=True)
class Spectralification:
    space: FiniteSpace
    lattice: FiniteLattice
    unit: dict
    injective: bool

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "lattice": self.lattice.to_json(),
                "map": dict(sorted(self.unit.items())), "injective": self.injective}


def opens_lattice(X: FiniteSpace) -> FiniteLattice:
    """The lattice of (quasicompact) opens, labelled by their formatted point sets."""
    opens = X.sorted_opens()
    lab = {U: _format_set(U, X.points) for U in opens}
    leq = [(lab[U], lab[V]) for U in opens for V in opens if U <= V]
    return validate_lattice(lab.values(), leq, lab[frozenset()], lab[frozenset(X.points)])


def spectralify(X: FiniteSpace) -> Spectralification:
    """``Spec(D(X))`` and the unit map ``x |-> {S in D(X) : x in S}``."""
    D = opens_lattice(X)
    sp = spec_space(D)
    lab = {_format_set(U, X.points): U for U in X.opens}
    by_filter = {F: l for F, l in zip(sp.filters, sp.labels)}
    unit = {}
    for x in X.points:
        F = frozenset(s for s, U in lab.items() if x in U)
        unit[x] = by_filter[F]
    injective = len(set(unit.values())) == len(unit)
    return Spectralification(sp.space, D, unit, injective)


def is_homeomorphism(X: FiniteSpace, Y: FiniteSpace, f: dict) -> bool:
    if sorted(f) != sorted(X.points) or sorted(set(f.values())) != sorted(Y.points):
        return False
    if len(set(f.values())) != len(f):
        return False
    image = {frozenset(f[x] for x in U) for U in X.opens}
    return image == set(Y.opens)
