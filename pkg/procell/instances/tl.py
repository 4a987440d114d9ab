# procell/instances/tl.py
"""
Temperley-Lieb diagram algebras TL_n(delta).

A diagram is a perfect non-crossing matching of 2n boundary points: top points
0..n-1 and bottom points n..2n-1, both read left to right. The product a*b
stacks a on top of b; every closed loop in the middle contributes delta.

Cells are through-strand counts n, n-2, ..., fewer strands lower in the order,
and a cell's tableaux are the half-diagrams: cups plus free points, with no
free point nested inside a cup.
"""

from functools import lru_cache
from math import comb

from config.settings import settings

from .. import ProcellError
from ..cellcore import BasisIndex, CellDatum
from ..posets import FinitePoset
from ..scalars import RATIONALS, Field, Scalar

FREE = -1

HalfDiagram = tuple[int, ...]


class BoundExceededError(ProcellError):
    pass


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


class TLDiagram:
    """Planar perfect matching; pairing[p] is the partner of boundary point p."""

    __slots__ = ("n", "pairing")

    def __init__(self, n: int, pairing: tuple[int, ...]):
        self.n = n
        self.pairing = tuple(pairing)
        if len(self.pairing) != 2 * n:
            raise ProcellError(f"a diagram on {n} strands needs {2 * n} points")
        for p, q in enumerate(self.pairing):
            if not 0 <= q < 2 * n or q == p or self.pairing[q] != p:
                raise ProcellError(f"{self.pairing} is not a perfect matching")
        if not self.is_planar():
            raise ProcellError(f"{self.pairing} has crossing strands")

    def _circle(self, p: int) -> int:
        # boundary position going round: top left to right, then bottom right to left
        return p if p < self.n else 3 * self.n - 1 - p

    def is_planar(self) -> bool:
        arcs = sorted({tuple(sorted((self._circle(p), self._circle(q)))) for p, q in enumerate(self.pairing)})
        for i, (a, b) in enumerate(arcs):
            for c, d in arcs[i + 1:]:
                if a < c < b < d:
                    return False
        return True

    @classmethod
    def identity(cls, n: int) -> "TLDiagram":
        return cls(n, tuple(range(n, 2 * n)) + tuple(range(n)))

    @classmethod
    def generator(cls, n: int, i: int) -> "TLDiagram":
        """e_i: cap on top points i, i+1 and cup on the bottom ones, straight elsewhere."""
        pairing = list(range(n, 2 * n)) + list(range(n))
        pairing[i], pairing[i + 1] = i + 1, i
        pairing[n + i], pairing[n + i + 1] = n + i + 1, n + i
        return cls(n, tuple(pairing))

    def through_strands(self) -> int:
        return sum(1 for p in range(self.n) if self.pairing[p] >= self.n)

    def flip(self) -> "TLDiagram":
        n = self.n
        swap = lambda p: p + n if p < n else p - n
        return TLDiagram(n, tuple(swap(self.pairing[swap(p)]) for p in range(2 * n)))

    def halves(self) -> tuple[HalfDiagram, HalfDiagram]:
        n = self.n
        top = tuple(q if q < n else FREE for q in self.pairing[:n])
        bottom = tuple(q - n if q >= n else FREE for q in self.pairing[n:])
        return top, bottom

    @classmethod
    def from_halves(cls, top: HalfDiagram, bottom: HalfDiagram) -> "TLDiagram":
        n = len(top)
        if len(bottom) != n:
            raise ProcellError("half-diagrams of different sizes")
        free_top = [i for i in range(n) if top[i] == FREE]
        free_bottom = [i for i in range(n) if bottom[i] == FREE]
        if len(free_top) != len(free_bottom):
            raise ProcellError("half-diagrams with different numbers of free points")
        pairing = [0] * (2 * n)
        for i in range(n):
            if top[i] != FREE:
                pairing[i] = top[i]
            if bottom[i] != FREE:
                pairing[n + i] = n + bottom[i]
        for i, j in zip(free_top, free_bottom):
            pairing[i], pairing[n + j] = n + j, i
        return cls(n, tuple(pairing))

    def compose(self, other: "TLDiagram") -> tuple["TLDiagram", int]:
        """self stacked on top of other; returns the diagram and the number of closed loops."""
        n = self.n
        if other.n != n:
            raise ProcellError("cannot compose diagrams on different numbers of strands")
        a, b = self.pairing, other.pairing
        seen_middle = set()
        result = [0] * (2 * n)

        def walk(side: str, p: int) -> int:
            # follow arcs through the middle row until an outer point is reached
            while True:
                if side == "a":
                    q = a[p]
                    if q < n:
                        return q
                    seen_middle.add(q - n)
                    side, p = "b", q - n
                else:
                    q = b[p]
                    if q >= n:
                        return q
                    seen_middle.add(q)
                    side, p = "a", q + n

        for i in range(n):
            result[i] = walk("a", i)
            result[n + i] = walk("b", n + i)

        loops = 0
        for m in range(n):
            if m in seen_middle:
                continue
            loops += 1
            p = m
            while True:
                seen_middle.add(p)
                j = a[p + n] - n
                seen_middle.add(j)
                q = b[j]
                if q == m:
                    break
                p = q
        return TLDiagram(n, tuple(result)), loops

    def render(self) -> str:
        n = self.n
        name = lambda p: f"t{p}" if p < n else f"b{p - n}"
        arcs = sorted({tuple(sorted((p, q))) for p, q in enumerate(self.pairing)})
        return " ".join(f"{name(p)}-{name(q)}" for p, q in arcs)

    def __eq__(self, other):
        return isinstance(other, TLDiagram) and self.pairing == other.pairing

    def __hash__(self):
        return hash(self.pairing)

    def __repr__(self) -> str:
        return f"TLDiagram({self.render()})"


def half_diagrams(n: int, strands: int) -> list[HalfDiagram]:
    """
    Half-diagrams on n points with `strands` free points, in a fixed order:
    at every position a free point is tried before opening a cup.
    """
    if strands < 0 or strands > n or (n - strands) % 2:
        return []
    out = []

    def build(pos: int, acc: list, stack: list[int], free_left: int) -> None:
        if pos == n:
            if not stack and free_left == 0:
                out.append(tuple(acc))
            return
        remaining = n - pos
        # free point, only at depth zero
        if not stack and free_left > 0:
            acc.append(FREE)
            build(pos + 1, acc, stack, free_left - 1)
            acc.pop()
        # close the innermost open cup
        if stack:
            i = stack.pop()
            acc.append(i)
            acc[i] = pos
            build(pos + 1, acc, stack, free_left)
            acc[i] = None
            acc.pop()
            stack.append(i)
        # open a cup if there is room to close everything
        if len(stack) + 1 + free_left <= remaining - 1:
            stack.append(pos)
            acc.append(None)
            build(pos + 1, acc, stack, free_left)
            acc.pop()
            stack.pop()

    build(0, [], [], strands)
    return out


def tl_datum(n: int, delta: Scalar | int | str = 1, field: Field = RATIONALS) -> CellDatum:
    if not 1 <= n <= settings.TL_MAX_N:
        raise BoundExceededError(f"TL_n needs 1 <= n <= {settings.TL_MAX_N}, got {n}")
    delta = field(delta)
    cells = list(range(n, -1, -2))
    tableaux = {k: tuple(half_diagrams(n, k)) for k in cells}
    # fewer through-strands lie lower
    poset = FinitePoset.from_predicate(cells, lambda a, b: a <= b, name=f"strands({n})")

    @lru_cache(maxsize=None)
    def diagram(idx: BasisIndex) -> TLDiagram:
        return TLDiagram.from_halves(idx.s, idx.t)

    def index_of(dgm: TLDiagram) -> BasisIndex:
        top, bottom = dgm.halves()
        return BasisIndex(dgm.through_strands(), top, bottom)

    def mult(a: BasisIndex, b: BasisIndex):
        dgm, loops = diagram(a).compose(diagram(b))
        return {index_of(dgm): delta ** loops}

    identity = index_of(TLDiagram.identity(n))
    return CellDatum(
        name=f"TL_{n}(delta={delta.text()})",
        field=field,
        poset=poset,
        tableaux=tableaux,
        mult=mult,
        unit={identity: 1},
        family="tl",
    )


def tl_basis_diagrams(n: int) -> list[TLDiagram]:
    """All diagrams of TL_n, cell by cell."""
    out = []
    for k in range(n, -1, -2):
        halves = half_diagrams(n, k)
        out.extend(TLDiagram.from_halves(s, t) for s in halves for t in halves)
    return out
