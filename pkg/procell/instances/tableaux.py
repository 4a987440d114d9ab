# procell/instances/tableaux.py
"""
Type A tableau combinatorics: partitions, dominance, semistandard tableaux,
column removal and the tableau tower.

The tower for a given n has one cell per sl_n weight, written as a partition
with fewer than n rows. A level shape with n rows is identified with the shape
obtained by stripping its full-height columns, which is exactly what the
column-removal connecting maps do to labels. Order: a <= b iff a dominates b
once b is padded with the right number of full columns ("a < b means a
dominates b").
"""

import itertools
from typing import Iterator

from config.settings import settings

from .. import ProcellError
from ..model import CoherenceSummary
from ..posets import FinitePoset, LazyPoset
from ..utils import label_text, trace
from .tl import BoundExceededError

Shape = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]


class RowCountError(ProcellError):
    pass


class ShapeMismatchError(ProcellError):
    pass


def is_partition(shape) -> bool:
    return (
        isinstance(shape, tuple)
        and all(isinstance(x, int) and not isinstance(x, bool) and x > 0 for x in shape)
        and all(shape[i] >= shape[i + 1] for i in range(len(shape) - 1))
    )


def partitions(r: int, max_rows: int | None = None, max_part: int | None = None) -> list[Shape]:
    """Partitions of r, largest first in reverse lexicographic order."""
    if r == 0:
        return [()]
    if max_rows == 0:
        return []
    top = r if max_part is None else min(r, max_part)
    out = []
    for first in range(top, 0, -1):
        rest_rows = None if max_rows is None else max_rows - 1
        out.extend((first,) + p for p in partitions(r - first, rest_rows, first))
    return out


def dominates(a: Shape, b: Shape) -> bool:
    """a >= b in dominance: equal sizes and every partial sum of a at least that of b."""
    if sum(a) != sum(b):
        return False
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa < sb:
            return False
    return True


def partition_poset(r: int) -> FinitePoset:
    """All partitions of r; a <= b iff a dominates b."""
    return FinitePoset.from_predicate(partitions(r), dominates, name=f"partitions({r})")


def shape_of(t: Tableau) -> Shape:
    return tuple(len(row) for row in t)


def is_semistandard(t: Tableau, n: int | None = None) -> bool:
    if not is_partition(shape_of(t)):
        return False
    for i, row in enumerate(t):
        for j, v in enumerate(row):
            if v < 1 or (n is not None and v > n):
                return False
            if j > 0 and row[j - 1] > v:
                return False
            if i > 0 and t[i - 1][j] >= v:
                return False
    return True


def content(t: Tableau, n: int) -> tuple[int, ...]:
    """Number of entries equal to 1, ..., n."""
    counts = [0] * n
    for row in t:
        for v in row:
            counts[v - 1] += 1
    return tuple(counts)


def enumerate_ssyt(shape: Shape, n: int, allow_full: bool = False) -> list[Tableau]:
    """
    Semistandard tableaux of `shape` with entries 1..n, filled row by row,
    box by box, smallest admissible entry first.

    A tower cell has fewer than n rows; allow_full admits level shapes with
    exactly n rows, whose first column is forced to be 1..n.
    """
    if not is_partition(shape):
        raise ShapeMismatchError(f"{label_text(shape)} is not a partition")
    limit = n if allow_full else n - 1
    if len(shape) > limit:
        raise RowCountError(f"shape {label_text(shape)} has {len(shape)} rows, at most {limit} allowed for n={n}")
    boxes = [(i, j) for i, length in enumerate(shape) for j in range(length)]
    out: list[Tableau] = []
    fill: dict[tuple[int, int], int] = {}

    def place(k: int) -> None:
        if k == len(boxes):
            out.append(tuple(tuple(fill[(i, j)] for j in range(length)) for i, length in enumerate(shape)))
            return
        i, j = boxes[k]
        low = 1
        if j > 0:
            low = max(low, fill[(i, j - 1)])
        if i > 0:
            low = max(low, fill[(i - 1, j)] + 1)
        for v in range(low, n + 1):
            fill[(i, j)] = v
            place(k + 1)
        fill.pop((i, j), None)

    place(0)
    return out


def brute_force_ssyt_count(shape: Shape, n: int) -> int:
    """Every filling with entries 1..n, kept if semistandard."""
    size = sum(shape)
    count = 0
    for values in itertools.product(range(1, n + 1), repeat=size):
        it = iter(values)
        t = tuple(tuple(next(it) for _ in range(length)) for length in shape)
        if is_semistandard(t, n):
            count += 1
    return count


def _drop_first_column(t: Tableau) -> Tableau:
    return tuple(row[1:] for row in t if len(row) > 1)


def column_removal(s: Tableau, t: Tableau, n: int) -> tuple[Tableau, Tableau] | None:
    """
    Label-level connecting map: when the shape has a full first column (n rows),
    delete the leftmost column of both tableaux; otherwise the pair goes to zero,
    returned as None.
    """
    shape = shape_of(s)
    if shape != shape_of(t):
        raise ShapeMismatchError(f"tableaux of shapes {label_text(shape)} and {label_text(shape_of(t))}")
    if not (is_semistandard(s, n) and is_semistandard(t, n)):
        raise ProcellError("column removal needs semistandard tableaux with entries at most n")
    if len(shape) < n:
        return None
    return _drop_first_column(s), _drop_first_column(t)


def strip_full_columns(shape: Shape, n: int) -> Shape:
    """The tower label of a level shape with at most n rows."""
    if len(shape) > n:
        raise RowCountError(f"shape {label_text(shape)} has more than {n} rows")
    if len(shape) < n:
        return shape
    k = shape[n - 1]
    return tuple(x - k for x in shape if x > k)


def _pad_columns(shape: Shape, k: int, n: int) -> Shape:
    rows = list(shape) + [0] * (n - len(shape))
    return tuple(x + k for x in rows)


class TableauTower:
    """
    The cell poset of the tower for sl_n: shapes with fewer than n rows, each
    with its semistandard tableaux, plus the column-removal label maps.
    """

    def __init__(self, n: int):
        self.n = n
        self.poset = LazyPoset(
            name=f"tower({n})",
            contains=self.contains,
            leq=self.leq,
            up_set=self.up_set,
            enumerate=self.iter_shapes,
        )

    def contains(self, shape) -> bool:
        return is_partition(shape) and len(shape) < self.n

    def leq(self, a: Shape, b: Shape) -> bool:
        diff = sum(a) - sum(b)
        if diff < 0 or diff % self.n:
            return False
        if diff == 0:
            return dominates(a, b)
        return dominates(a, _pad_columns(b, diff // self.n, self.n))

    def up_set(self, a: Shape) -> Iterator[Shape]:
        size = sum(a)
        for k in range(size // self.n + 1):
            for b in partitions(size - k * self.n, max_rows=self.n - 1):
                if self.leq(a, b):
                    yield b

    def iter_shapes(self) -> Iterator[Shape]:
        for r in itertools.count(0):
            yield from partitions(r, max_rows=self.n - 1)

    def tableaux(self, shape: Shape) -> list[Tableau]:
        return enumerate_ssyt(shape, self.n)

    def level_shapes(self, max_boxes: int) -> list[Shape]:
        """Shapes with at most n rows and at most max_boxes boxes."""
        return [p for r in range(max_boxes + 1) for p in partitions(r, max_rows=self.n)]

    def coherence_check(self, max_boxes: int) -> CoherenceSummary:
        """
        Exhaustive check of column removal on every pair (S, T) of level shapes
        up to max_boxes: pairs of one shape all map into one common smaller shape
        or all to zero, images stay semistandard, the tower label is preserved,
        and removal commutes with swapping S and T.
        """
        n = self.n
        pairs = mapped = zeroed = 0
        violations: list[str] = []
        for shape in self.level_shapes(max_boxes):
            tabs = enumerate_ssyt(shape, n, allow_full=True)
            images = set()
            for s, t in itertools.product(tabs, repeat=2):
                pairs += 1
                image = column_removal(s, t, n)
                swapped = column_removal(t, s, n)
                if image is None:
                    zeroed += 1
                    images.add(None)
                    if swapped is not None:
                        violations.append(f"swap of {label_text(s)}, {label_text(t)} is not zero")
                    continue
                mapped += 1
                s2, t2 = image
                images.add(shape_of(s2))
                if shape_of(s2) != shape_of(t2) or not (is_semistandard(s2, n) and is_semistandard(t2, n)):
                    violations.append(f"image of {label_text(s)}, {label_text(t)} is not a semistandard pair")
                if strip_full_columns(shape_of(s2), n) != strip_full_columns(shape, n):
                    violations.append(f"removal moves {label_text(s)} to another tower cell")
                if swapped != (t2, s2):
                    violations.append(f"removal does not commute with swapping {label_text(s)}, {label_text(t)}")
            if len(images) > 1:
                violations.append(f"pairs of shape {label_text(shape)} split between cells or zero")
        trace("Tableaux", f"coherence n={n} boxes<={max_boxes}: {pairs} pairs, {len(violations)} violations")
        return CoherenceSummary(
            n=n, max_boxes=max_boxes, pairs_checked=pairs, mapped=mapped, zeroed=zeroed, violations=violations
        )


def tableau_tower(n: int) -> TableauTower:
    if not 2 <= n <= settings.TOWER_MAX_N:
        raise BoundExceededError(f"the tableau tower needs 2 <= n <= {settings.TOWER_MAX_N}, got {n}")
    return TableauTower(n)

