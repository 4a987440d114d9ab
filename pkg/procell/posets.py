# procell/posets.py
"""
Finite and lazily enumerated posets, coideals and the profinite-type check.

A lazy poset never inverts its order predicate: it must ship an up-set
enumerator listing <a> = {b : a <= b}. Profinite type means each <a> is finite,
which is only ever observed through that enumerator under a cap.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from config.settings import settings

from . import ProcellError
from .model import ProfiniteEntry, ProfiniteReport
from .utils import label_text, seeded_rng, sort_key, trace

Label = Hashable


class UnknownElementError(ProcellError):
    pass


class EnumerationCapExceeded(ProcellError):
    def __init__(self, element: Label, cap: int):
        super().__init__(f"<{label_text(element)}> has more than {cap} elements")
        self.element = element
        self.cap = cap


class CoidealSizeGuard(ProcellError):
    pass


class NotACoideal(ProcellError):
    pass


class Poset:
    """Common interface. Subclasses provide contains, leq, up_set and iter_elements."""

    name: str = "poset"
    is_finite: bool = False

    def contains(self, a: Label) -> bool:
        raise NotImplementedError

    def leq(self, a: Label, b: Label) -> bool:
        raise NotImplementedError

    def lt(self, a: Label, b: Label) -> bool:
        return a != b and self.leq(a, b)

    def up_set(self, a: Label) -> Iterator[Label]:
        raise NotImplementedError

    def iter_elements(self) -> Iterator[Label]:
        raise NotImplementedError

    def ordered(self, labels: Iterable[Label]) -> list[Label]:
        return sorted(labels, key=sort_key)

    def require(self, a: Label) -> None:
        if not self.contains(a):
            raise UnknownElementError(f"{label_text(a)} is not an element of {self.name}")


class FinitePoset(Poset):
    """
    Explicit element list (load order is kept) plus the reflexive-transitive
    closure of the given relation.
    """

    is_finite = True

    def __init__(self, elements: Sequence[Label], relation: Iterable[tuple[Label, Label]], name: str = "finite"):
        self.name = name
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ProcellError(f"{name}: duplicate poset elements")
        self._index = {a: i for i, a in enumerate(self.elements)}
        above: dict[Label, set[Label]] = {a: {a} for a in self.elements}
        for a, b in relation:
            self.require(a)
            self.require(b)
            above[a].add(b)
        # transitive closure, Floyd-Warshall style over the element list
        for k in self.elements:
            for a in self.elements:
                if k in above[a]:
                    above[a] |= above[k]
        self._above = {a: frozenset(s) for a, s in above.items()}

    @classmethod
    def from_covers(cls, elements: Sequence[Label], covers: Iterable[tuple[Label, Label]], name: str = "finite") -> "FinitePoset":
        """covers are pairs (a, b) with a < b; the closure is computed on load."""
        return cls(elements, covers, name=name)

    @classmethod
    def from_predicate(cls, elements: Sequence[Label], leq: Callable[[Label, Label], bool], name: str = "finite") -> "FinitePoset":
        pairs = [(a, b) for a in elements for b in elements if a != b and leq(a, b)]
        return cls(elements, pairs, name=name)

    def contains(self, a: Label) -> bool:
        try:
            return a in self._index
        except TypeError:
            return False

    def leq(self, a: Label, b: Label) -> bool:
        self.require(a)
        self.require(b)
        return b in self._above[a]

    def up_set(self, a: Label) -> Iterator[Label]:
        self.require(a)
        return iter(self.ordered(self._above[a]))

    def iter_elements(self) -> Iterator[Label]:
        return iter(self.elements)

    def ordered(self, labels: Iterable[Label]) -> list[Label]:
        return sorted(labels, key=lambda a: self._index[a])

    def covers(self) -> list[tuple[Label, Label]]:
        """Covering pairs (a, b): a < b with nothing strictly between."""
        out = []
        for a in self.elements:
            for b in self._above[a]:
                if a == b:
                    continue
                if not any(c not in (a, b) and self.leq(c, b) for c in self._above[a]):
                    out.append((a, b))
        return sorted(out, key=lambda p: (self._index[p[0]], self._index[p[1]]))

    def restrict(self, members: Iterable[Label], name: str | None = None) -> "FinitePoset":
        keep = set(members)
        elements = [a for a in self.elements if a in keep]
        pairs = [(a, b) for a in elements for b in self._above[a] if b in keep and a != b]
        return FinitePoset(elements, pairs, name=name or self.name)


class LazyPoset(Poset):
    """
    Infinite (or just large) poset given by callbacks:
    contains(a), leq(a, b), up_set(a) -> iterable listing <a>, enumerate() -> all elements.
    """

    def __init__(
        self,
        name: str,
        contains: Callable[[Label], bool],
        leq: Callable[[Label, Label], bool],
        up_set: Callable[[Label], Iterable[Label]],
        enumerate: Callable[[], Iterable[Label]],
    ):
        self.name = name
        self._contains = contains
        self._leq = leq
        self._up_set = up_set
        self._enumerate = enumerate

    def contains(self, a: Label) -> bool:
        try:
            return bool(self._contains(a))
        except (TypeError, ValueError):
            return False

    def leq(self, a: Label, b: Label) -> bool:
        self.require(a)
        self.require(b)
        return bool(self._leq(a, b))

    def up_set(self, a: Label) -> Iterator[Label]:
        self.require(a)
        return iter(self._up_set(a))

    def iter_elements(self) -> Iterator[Label]:
        return iter(self._enumerate())


@dataclass(frozen=True)
class Coideal:
    """A finite upward closed subset of a poset."""

    poset: Poset
    members: frozenset

    def __contains__(self, a: Label) -> bool:
        return a in self.members

    def __iter__(self) -> Iterator[Label]:
        return iter(self.poset.ordered(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def issubset(self, other: "Coideal") -> bool:
        return self.members <= other.members

    def union(self, other: "Coideal") -> "Coideal":
        return Coideal(self.poset, self.members | other.members)

    def intersection(self, other: "Coideal") -> "Coideal":
        return Coideal(self.poset, self.members & other.members)

    def labels(self) -> list[str]:
        return [label_text(a) for a in self]

    def __repr__(self) -> str:
        return "{" + ", ".join(self.labels()) + "}"


def _bounded_up_set(p: Poset, a: Label, cap: int) -> set[Label]:
    found: set[Label] = set()
    for b in p.up_set(a):
        found.add(b)
        if len(found) > cap:
            raise EnumerationCapExceeded(a, cap)
    return found


def principal(p: Poset, a: Label, cap: int | None = None) -> Coideal:
    return coideal_generate(p, [a], cap)


def coideal_generate(p: Poset, gens: Sequence[Label], cap: int | None = None) -> Coideal:
    """<x_1, ..., x_r> = {l : x_i <= l for some i}."""
    cap = settings.UPSET_CAP if cap is None else cap
    members: set[Label] = set()
    for g in gens:
        p.require(g)
        members |= _bounded_up_set(p, g, cap)
    return Coideal(p, frozenset(members))


def is_coideal(p: Poset, s: Iterable[Label], cap: int | None = None) -> bool:
    cap = settings.UPSET_CAP if cap is None else cap
    members = set(s)
    for a in members:
        p.require(a)
    if p.is_finite:
        return all(b in members for a in members for b in p.up_set(a))
    return all(_bounded_up_set(p, a, cap) <= members for a in members)


def as_coideal(p: Poset, s: Iterable[Label]) -> Coideal:
    members = frozenset(s)
    if not is_coideal(p, members):
        raise NotACoideal(f"{sorted(label_text(a) for a in members)} is not upward closed in {p.name}")
    return Coideal(p, members)


def whole(p: FinitePoset) -> Coideal:
    return Coideal(p, frozenset(p.elements))


def profinite_check(p: Poset, sample: Sequence[Label], cap: int | None = None) -> ProfiniteReport:
    """Try to enumerate <a> for each sampled a; exceeding the cap is reported, not raised."""
    cap = settings.UPSET_CAP if cap is None else cap
    if not sample:
        raise ProcellError("profinite_check needs a nonempty sample")
    entries = []
    for a in sample:
        p.require(a)
        try:
            size = len(_bounded_up_set(p, a, cap))
            entries.append(ProfiniteEntry(element=label_text(a), status="finite", size=size))
        except EnumerationCapExceeded:
            trace("Posets", f"<{label_text(a)}> exceeded cap {cap} in {p.name}")
            entries.append(ProfiniteEntry(element=label_text(a), status="exceeded", size=cap))
    return ProfiniteReport(poset=p.name, cap=cap, entries=entries)


def finite_coideals_below(p: Poset, bound: Coideal, max_size: int | None = None) -> list[Coideal]:
    """
    Every coideal contained in the finite coideal `bound`, from the empty one up
    to bound itself, listed by size (a linear extension of inclusion).
    """
    max_size = settings.MAX_COIDEAL_BOUND if max_size is None else max_size
    if len(bound) > max_size:
        raise CoidealSizeGuard(f"bound has {len(bound)} elements, limit is {max_size}")
    elems = list(bound)
    # anything above a member of bound is already in bound
    above = {a: {b for b in elems if p.lt(a, b)} for a in elems}
    out = []
    for k in range(len(elems) + 1):
        for combo in itertools.combinations(elems, k):
            s = set(combo)
            if all(above[a] <= s for a in s):
                out.append(Coideal(p, frozenset(s)))
    return out


def check_order_axioms(p: Poset, sample: Sequence[Label] | None = None, seed: int | None = None, trials: int = 200) -> list[str]:
    """
    Reflexivity, antisymmetry and transitivity. Exhaustive for finite posets;
    for lazy posets, seeded random triples drawn from `sample` (or the first
    elements of the enumeration).
    """
    violations = []
    if p.is_finite:
        elems = list(p.iter_elements())
        triples: Iterable[tuple] = itertools.product(elems, repeat=3)
    else:
        elems = list(sample) if sample else list(itertools.islice(p.iter_elements(), 40))
        rng = seeded_rng(seed)
        triples = [tuple(rng.choice(elems) for _ in range(3)) for _ in range(trials)]
        triples += [(a, a, a) for a in elems]
    for a, b, c in triples:
        if not p.leq(a, a):
            violations.append(f"not reflexive at {label_text(a)}")
        if a != b and p.leq(a, b) and p.leq(b, a):
            violations.append(f"not antisymmetric at {label_text(a)}, {label_text(b)}")
        if p.leq(a, b) and p.leq(b, c) and not p.leq(a, c):
            violations.append(f"not transitive at {label_text(a)}, {label_text(b)}, {label_text(c)}")
    return sorted(set(violations))


def _is_natural(a: Label) -> bool:
    return isinstance(a, int) and not isinstance(a, bool) and a >= 0


def reversed_naturals() -> LazyPoset:
    """0, 1, 2, ... ordered by the reverse of the usual order: <a> = {0, ..., a}."""
    return LazyPoset(
        name="naturals-reversed",
        contains=_is_natural,
        leq=lambda a, b: a >= b,
        up_set=lambda a: range(a, -1, -1),
        enumerate=lambda: itertools.count(0),
    )


def usual_naturals() -> LazyPoset:
    """0, 1, 2, ... with the usual order; <a> is infinite, so this is not of profinite type."""
    return LazyPoset(
        name="naturals",
        contains=_is_natural,
        leq=lambda a, b: a <= b,
        up_set=lambda a: itertools.count(a),
        enumerate=lambda: itertools.count(0),
    )
