# procell/cellcore.py
"""
Cell data (poset, tableaux, basis map C, involution *), algebra elements,
verification of the cellular axioms and extraction of structure constants.

A basis index (cell, S, T) stands for C^cell_{S,T}; the involution is always
the index swap (cell, S, T) -> (cell, T, S).
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Mapping, NamedTuple, Sequence

from config.settings import settings

from . import ProcellError
from .model import AxiomCheck, AxiomReport
from .posets import Label, Poset, UnknownElementError
from .scalars import Field, Matrix, Scalar
from .utils import label_text, trace
from .worker import run_parallel


class DatumMismatchError(ProcellError):
    pass


class UnknownCellError(ProcellError):
    pass


class MissingUnitError(ProcellError):
    pass


class InfiniteDatumError(ProcellError):
    pass


class InconsistencyError(ProcellError):
    """An axiom-3 style independence claim failed; witness names the probes."""

    def __init__(self, message: str, witness: Sequence[str]):
        super().__init__(f"{message} (witness: {', '.join(witness)})")
        self.witness = list(witness)


class BasisIndex(NamedTuple):
    cell: Label
    s: Hashable
    t: Hashable

    def star(self) -> "BasisIndex":
        return BasisIndex(self.cell, self.t, self.s)

    def text(self) -> str:
        return f"C[{label_text(self.cell)}; {label_text(self.s)}, {label_text(self.t)}]"


MultOracle = Callable[[BasisIndex, BasisIndex], Mapping[BasisIndex, Scalar]]


class CellDatum:
    """
    (poset, M, C, *) together with a multiplication oracle on basis indices.

    `tableaux` is either a mapping cell -> ordered tableau labels (finite data)
    or a callable (lazy data). The oracle returns finitely supported products.
    """

    def __init__(
        self,
        name: str,
        field: Field,
        poset: Poset,
        tableaux: Mapping[Label, Sequence[Hashable]] | Callable[[Label], Sequence[Hashable]],
        mult: MultOracle,
        unit: Mapping[BasisIndex, Scalar | int | str] | None = None,
        family: str | None = None,
    ):
        self.name = name
        self.family = family or name
        self.field = field
        self.poset = poset
        self._tableaux = tableaux
        self._mult = mult
        self._unit = None if unit is None else {BasisIndex(*k): field(v) for k, v in unit.items()}
        self._product = lru_cache(maxsize=None)(self._raw_product)
        # coideal members -> quotient algebra, filled by completion.cached_quotient
        self.quotient_cache: dict = {}

    @property
    def is_finite(self) -> bool:
        return self.poset.is_finite

    @property
    def has_unit(self) -> bool:
        return self._unit is not None

    def tableaux(self, cell: Label) -> tuple:
        self.require_cell(cell)
        if callable(self._tableaux):
            return tuple(self._tableaux(cell))
        return tuple(self._tableaux.get(cell, ()))

    def require_cell(self, cell: Label) -> None:
        try:
            self.poset.require(cell)
        except UnknownElementError as e:
            raise UnknownCellError(str(e)) from e

    def cells(self) -> list[Label]:
        if not self.is_finite:
            raise InfiniteDatumError(f"{self.name} has infinitely many cells; work in a quotient")
        return list(self.poset.iter_elements())

    def basis(self, cells: Iterable[Label] | None = None) -> list[BasisIndex]:
        cells = self.cells() if cells is None else list(cells)
        out = []
        for cell in cells:
            m = self.tableaux(cell)
            out.extend(BasisIndex(cell, s, t) for s in m for t in m)
        return out

    def contains_index(self, idx: BasisIndex) -> bool:
        if not self.poset.contains(idx.cell):
            return False
        m = self.tableaux(idx.cell)
        return idx.s in m and idx.t in m

    def _raw_product(self, a: BasisIndex, b: BasisIndex) -> "Element":
        return Element(self, self._mult(a, b))

    def product(self, a: BasisIndex, b: BasisIndex) -> "Element":
        return self._product(BasisIndex(*a), BasisIndex(*b))

    def element(self, terms: Mapping[BasisIndex, Scalar | int | str] | None = None) -> "Element":
        return Element(self, {BasisIndex(*k): self.field(v) for k, v in (terms or {}).items()})

    def basis_element(self, idx: BasisIndex) -> "Element":
        return Element(self, {BasisIndex(*idx): self.field.one})

    def zero(self) -> "Element":
        return Element(self, {})

    def unit(self) -> "Element":
        if self._unit is None:
            raise MissingUnitError(f"{self.name} carries no unit expansion")
        return Element(self, self._unit)

    def unit_terms(self) -> dict[BasisIndex, Scalar] | None:
        return None if self._unit is None else dict(self._unit)

    def __repr__(self) -> str:
        return f"CellDatum({self.name!r}, {self.field.descriptor})"


class Element:
    """Finitely supported combination of basis indices; no stored zeros."""

    __slots__ = ("datum", "terms")

    def __init__(self, datum: CellDatum, terms: Mapping[BasisIndex, Scalar]):
        self.datum = datum
        self.terms = {BasisIndex(*k): v for k, v in terms.items() if v}

    def _check(self, other: "Element") -> None:
        if other.datum is not self.datum:
            raise DatumMismatchError(f"elements of {self.datum.name} and {other.datum.name} cannot be combined")

    def coefficient(self, idx: BasisIndex) -> Scalar:
        return self.terms.get(BasisIndex(*idx), self.datum.field.zero)

    def support(self) -> list[BasisIndex]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, self.datum.field.zero) + v
        return Element(self.datum, out)

    def __neg__(self) -> "Element":
        return Element(self.datum, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: Scalar | int) -> "Element":
        c = self.datum.field(c)
        return Element(self.datum, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "Element") -> "Element":
        return multiply(self, other)

    def star(self) -> "Element":
        return Element(self.datum, {k.star(): v for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.datum is other.datum and self.terms == other.terms

    def __hash__(self):
        return hash((id(self.datum), frozenset(self.terms.items())))

    def text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{v.text()}*{k.text()}" for k, v in self.terms.items())

    def __repr__(self) -> str:
        return f"Element({self.text()})"


def multiply(x: Element, y: Element) -> Element:
    """Bilinear extension of the basis multiplication oracle."""
    x._check(y)
    d = x.datum
    zero = d.field.zero
    out: dict[BasisIndex, Scalar] = {}
    for a, ca in x.terms.items():
        for b, cb in y.terms.items():
            c = ca * cb
            for k, v in d.product(a, b).terms.items():
                out[k] = out.get(k, zero) + c * v
    return Element(d, out)


def reduce_mod_lt(d: CellDatum, x: Element, cell: Label) -> Element:
    """Delete every term (mu, S, T) with mu < cell, i.e. reduce modulo A(<cell)."""
    d.require_cell(cell)
    return Element(x.datum, {k: v for k, v in x.terms.items() if not d.poset.lt(k.cell, cell)})


@dataclass(frozen=True)
class StructureConstants:
    """r_a(S', S) for one element a and one cell: rows S', columns S."""

    element: Element
    cell: Label
    tableaux: tuple
    matrix: Matrix


def _column(d: CellDatum, reduced: Element, cell: Label, t: Hashable, m: tuple, probe: str) -> list[Scalar]:
    pos = {s: i for i, s in enumerate(m)}
    col = [d.field.zero] * len(m)
    for k, v in reduced.terms.items():
        if k.cell != cell or k.t != t or k.s not in pos:
            raise InconsistencyError(
                f"{probe} leaves {k.text()} outside span(C[{label_text(cell)}; S', {label_text(t)}]) mod A(<{label_text(cell)})",
                [probe, k.text()],
            )
        col[pos[k.s]] = v
    return col


def structure_constants(d: CellDatum, a: Element, cell: Label) -> StructureConstants:
    """
    Read r_a(S', S) off a * C_{S,T} mod A(<cell) for the first T in load order,
    then insist every other T gives the same column.
    """
    d.require_cell(cell)
    m = d.tableaux(cell)
    columns = []
    for s in m:
        first = None
        for t in m:
            idx = BasisIndex(cell, s, t)
            probe = f"a*{idx.text()}"
            col = _column(d, reduce_mod_lt(d, multiply(a, d.basis_element(idx)), cell), cell, t, m, probe)
            if first is None:
                first = (t, col)
            elif col != first[1]:
                raise InconsistencyError(
                    f"r_a depends on T for cell {label_text(cell)}",
                    [BasisIndex(cell, s, first[0]).text(), idx.text()],
                )
        columns.append(first[1])
    return StructureConstants(a, cell, m, Matrix.from_columns(d.field, columns, len(m)))


def _fail(name: str, detail: str, witness: Sequence[str]) -> AxiomCheck:
    return AxiomCheck(name=name, status="fail", detail=detail, witness=list(witness))


def _check_basis(d: CellDatum, basis: list[BasisIndex]) -> tuple[AxiomCheck, dict]:
    name = "basis"
    for cell in d.cells():
        m = d.tableaux(cell)
        if not m:
            return _fail(name, f"M({label_text(cell)}) is empty", [label_text(cell)]), {}
        if len(set(m)) != len(m):
            return _fail(name, f"M({label_text(cell)}) repeats a tableau", [label_text(cell)]), {}
    if len(set(basis)) != len(basis):
        return _fail(name, "basis indices are not distinct", []), {}
    members = set(basis)
    products = {}
    for a, b in itertools.product(basis, repeat=2):
        try:
            p = d.product(a, b)
        except Exception as e:
            return _fail(name, f"product undefined: {e}", [a.text(), b.text()]), {}
        for k, v in p.terms.items():
            if k not in members:
                return _fail(name, f"product lands outside the basis at {k.text()}", [a.text(), b.text()]), {}
            if v.field != d.field:
                return _fail(name, "product coefficient in the wrong field", [a.text(), b.text()]), {}
        products[(a, b)] = p
    if d.has_unit:
        for k in d.unit_terms():
            if k not in members:
                return _fail(name, "unit expansion uses a label outside the basis", [k.text()]), {}
    return AxiomCheck(name=name, status="pass", detail=f"{len(basis)} basis indices, {len(products)} products"), products


def _check_involution(d: CellDatum, basis: list[BasisIndex], products: dict) -> AxiomCheck:
    name = "involution"
    members = set(basis)
    for b in basis:
        if b.star() not in members or b.star().star() != b:
            return _fail(name, "* does not permute the basis", [b.text()])
    for a, b in itertools.product(basis, repeat=2):
        if products[(a, b)].star() != products[(b.star(), a.star())]:
            return _fail(name, "(ab)* != b*a*", [a.text(), b.text()])
    return AxiomCheck(name=name, status="pass", detail="(ab)* = b*a* on all basis pairs, ** = id")


def _cell_axiom_failure(d: CellDatum, basis: list[BasisIndex], products: dict, cell: Label) -> list[str] | None:
    m = d.tableaux(cell)
    for a in basis:
        for s in m:
            first = None
            for t in m:
                idx = BasisIndex(cell, s, t)
                reduced = reduce_mod_lt(d, products[(a, idx)], cell)
                try:
                    col = _column(d, reduced, cell, t, m, f"{a.text()}*{idx.text()}")
                except InconsistencyError as e:
                    return e.witness
                if first is None:
                    first = (idx, col)
                elif col != first[1]:
                    return [a.text(), first[0].text(), idx.text()]
    return None


def _check_cell_axiom(d: CellDatum, basis: list[BasisIndex], products: dict, jobs: int) -> AxiomCheck:
    name = "cell"
    cells = d.cells()
    results = run_parallel(lambda c: _cell_axiom_failure(d, basis, products, c), cells, jobs)
    for cell, witness in zip(cells, results):
        if witness is not None:
            return _fail(name, f"a*C_(S,T) mod A(<{label_text(cell)}) depends on T or leaves the cell", witness)
    return AxiomCheck(name=name, status="pass", detail=f"r_a(S',S) independent of T on {len(cells)} cells")


def _check_associativity(d: CellDatum, basis: list[BasisIndex], products: dict) -> AxiomCheck:
    name = "associativity"
    if len(basis) > settings.ASSOC_MAX_DIM:
        return AxiomCheck(name=name, status="skipped", detail=f"dimension {len(basis)} > {settings.ASSOC_MAX_DIM}")
    for a, b, c in itertools.product(basis, repeat=3):
        left = multiply(products[(a, b)], d.basis_element(c))
        right = multiply(d.basis_element(a), products[(b, c)])
        if left != right:
            return _fail(name, "(ab)c != a(bc)", [a.text(), b.text(), c.text()])
    return AxiomCheck(name=name, status="pass", detail="all basis triples")


def verify_cell_datum(d: CellDatum, jobs: int | None = None, check_associativity: bool = True) -> AxiomReport:
    """
    Exhaustive check of the cellular axioms on a finite datum: basis well-formedness,
    * as an involutory anti-automorphism, and T-independence of r_a mod A(<cell).
    Failures carry a witness; nothing is raised.
    """
    if not d.is_finite:
        raise InfiniteDatumError(f"{d.name} is infinite; verify a finite quotient instead")
    jobs = settings.DEFAULT_JOBS if jobs is None else jobs
    basis = d.basis()
    trace("Cellcore", f"verifying {d.name}: dim {len(basis)}, {len(d.cells())} cells")
    basis_check, products = _check_basis(d, basis)
    checks = [basis_check]
    if basis_check.status == "fail":
        for name in ("involution", "cell", "associativity"):
            checks.append(AxiomCheck(name=name, status="skipped", detail="basis check failed"))
    else:
        checks.append(_check_involution(d, basis, products))
        checks.append(_check_cell_axiom(d, basis, products, jobs))
        if check_associativity:
            checks.append(_check_associativity(d, basis, products))
    report = AxiomReport(datum=d.name, field=d.field.descriptor, dimension=len(basis), checks=checks)
    trace("Cellcore", f"{d.name}: " + ", ".join(f"{c.name}={c.status}" for c in checks))
    return report


def cell_ideal_check(d: CellDatum, cell: Label) -> list[str] | None:
    """A(<cell) absorbs multiplication by every basis element on both sides; a witness pair on failure."""
    d.require_cell(cell)
    basis = d.basis()
    for m in (b for b in basis if d.poset.lt(b.cell, cell)):
        for a in basis:
            for prod in (d.product(a, m), d.product(m, a)):
                if not reduce_mod_lt(d, prod, cell).is_zero():
                    return [a.text(), m.text()]
    return None
