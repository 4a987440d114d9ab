# procell/repthy.py
"""
Cell modules W(cell), the bilinear form phi, radicals, the simple quotients
L(cell) = W(cell)/rad(cell) and the classification of absolutely irreducible modules.
"""

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from config.settings import settings

from . import ProcellError
from .cellcore import (
    BasisIndex,
    CellDatum,
    Element,
    InconsistencyError,
    reduce_mod_lt,
    structure_constants,
)
from .model import Classification, ClassificationRow
from .posets import Label
from .scalars import DimensionMismatchError, Matrix, Scalar, Vector, span_dimension, span_rank
from .utils import label_text, trace
from .worker import run_parallel


class ZeroModuleError(ProcellError):
    pass


class EmptyCellError(ProcellError):
    """A cell with no tableaux has no form to read."""


class MatrixModule:
    """A finite dimensional module, given by the matrix of every algebra basis index."""

    def __init__(self, datum: CellDatum, dim: int, action: Mapping[BasisIndex, Matrix], name: str):
        self.datum = datum
        self.dim = dim
        self.action = dict(action)
        self.name = name

    def act(self, x: Element) -> Matrix:
        out = Matrix.zeros(self.datum.field, self.dim, self.dim)
        for b, c in x.terms.items():
            out = out + self.action[b].scale(c)
        return out

    def matrices(self) -> list[Matrix]:
        return list(self.action.values())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, dim={self.dim})"


class CellModule(MatrixModule):
    def __init__(self, datum: CellDatum, cell: Label, tableaux: tuple, action: Mapping[BasisIndex, Matrix]):
        super().__init__(datum, len(tableaux), action, name=f"W({label_text(cell)})")
        self.cell = cell
        self.tableaux = tableaux


def cell_module(d: CellDatum, cell: Label) -> CellModule:
    """W(cell): basis C_S, a C_S = sum_S' r_a(S', S) C_S'."""
    action = {b: structure_constants(d, d.basis_element(b), cell).matrix for b in d.basis()}
    return CellModule(d, cell, d.tableaux(cell), action)


@dataclass(frozen=True)
class GramForm:
    cell: Label
    tableaux: tuple
    matrix: Matrix

    def value(self, s: Hashable, t: Hashable) -> Scalar:
        return self.matrix.entry(self.tableaux.index(s), self.tableaux.index(t))

    def determinant(self) -> Scalar:
        return self.matrix.determinant()


def _phi(d: CellDatum, cell: Label, s1, t1, s2, t2) -> Scalar:
    """C_{S1,T1} C_{S2,T2} = phi(T1, S2) C_{S1,T2} mod A(<cell); anything else is corruption."""
    prod = reduce_mod_lt(d, d.product(BasisIndex(cell, s1, t1), BasisIndex(cell, s2, t2)), cell)
    target = BasisIndex(cell, s1, t2)
    for k in prod.terms:
        if k != target:
            raise InconsistencyError(
                f"product within cell {label_text(cell)} is not a multiple of {target.text()}",
                [BasisIndex(cell, s1, t1).text(), BasisIndex(cell, s2, t2).text(), k.text()],
            )
    return prod.coefficient(target)


def gram(d: CellDatum, cell: Label) -> GramForm:
    """
    phi(T1, S2) read with the first probe pair (S1, T2) in load order,
    then checked against every other probe pair.
    """
    d.require_cell(cell)
    m = d.tableaux(cell)
    if not m:
        raise EmptyCellError(f"M({label_text(cell)}) is empty")
    first = m[0]
    rows = [[_phi(d, cell, first, t1, s2, first) for s2 in m] for t1 in m]
    for i, t1 in enumerate(m):
        for j, s2 in enumerate(m):
            for s1 in m:
                for t2 in m:
                    if _phi(d, cell, s1, t1, s2, t2) != rows[i][j]:
                        raise InconsistencyError(
                            f"phi({label_text(t1)}, {label_text(s2)}) depends on the probe pair",
                            [f"S1={label_text(first)},T2={label_text(first)}", f"S1={label_text(s1)},T2={label_text(t2)}"],
                        )
    return GramForm(cell, m, Matrix.from_rows(d.field, rows, len(m)))


@dataclass(frozen=True)
class IrreducibleReport:
    cell: Label
    dim_w: int
    rad: list[Vector]
    dim_l: int

    @property
    def dim_rad(self) -> int:
        return len(self.rad)

    @property
    def in_lambda0(self) -> bool:
        return self.dim_l > 0


def irreducible_report(d: CellDatum, cell: Label) -> IrreducibleReport:
    """rad = {x : phi(x, y) = 0 for all y}; dim L = rank(phi)."""
    g = gram(d, cell).matrix
    return IrreducibleReport(cell=cell, dim_w=g.rows, rad=g.left_nullspace(), dim_l=g.rank())


def submodule_check(m: MatrixModule, vs: Sequence[Sequence[Scalar]]) -> bool:
    """True iff span(vs) is stable under every action matrix."""
    field = m.datum.field
    for v in vs:
        if len(v) != m.dim:
            raise DimensionMismatchError(f"vector of length {len(v)} in a module of dimension {m.dim}")
    vs = [tuple(field(x) for x in v) for v in vs]
    base = span_rank(field, vs, m.dim)
    for a in m.matrices():
        for v in vs:
            if span_rank(field, vs + [a.apply(v)], m.dim) != base:
                return False
    return True


def quotient_module(m: MatrixModule, sub: Sequence[Vector], name: str | None = None) -> MatrixModule:
    """
    Action on m / span(sub), for an invariant subspace. Uses the adapted basis
    (rref rows of sub, then unit vectors on the non-pivot columns); in it every
    action matrix is block upper triangular and the lower right block is the quotient.
    """
    field = m.datum.field
    n = m.dim
    if sub:
        reduced, pivots = Matrix.from_rows(field, sub, n).rref()
        sub_basis = [reduced.row(i) for i in range(len(pivots))]
    else:
        pivots, sub_basis = [], []
    complement = [j for j in range(n) if j not in pivots]
    columns = list(sub_basis) + [tuple(field.one if i == j else field.zero for i in range(n)) for j in complement]
    change = Matrix.from_columns(field, columns, n)
    back = change.inverse()
    k = len(sub_basis)
    keep = list(range(k, n))
    action = {b: (back @ a @ change).submatrix(keep, keep) for b, a in m.action.items()}
    return MatrixModule(m.datum, n - k, action, name or f"{m.name}/sub")


def simple_module(d: CellDatum, cell: Label) -> MatrixModule:
    """L(cell) = W(cell) / rad(cell)."""
    w = cell_module(d, cell)
    rep = irreducible_report(d, cell)
    return quotient_module(w, rep.rad, name=f"L({label_text(cell)})")


def absolutely_irreducible(m: MatrixModule) -> bool:
    """Burnside: the action matrices span the full matrix algebra."""
    if m.dim == 0:
        raise ZeroModuleError(f"{m.name} is the zero module")
    return span_dimension(m.matrices(), m.dim) == m.dim * m.dim


def _classify_cell(d: CellDatum, cell: Label) -> ClassificationRow:
    rep = irreducible_report(d, cell)
    row = ClassificationRow(cell=label_text(cell), dim_w=rep.dim_w, dim_l=rep.dim_l, in_lambda0=rep.in_lambda0)
    if rep.in_lambda0:
        simple = quotient_module(cell_module(d, cell), rep.rad, name=f"L({label_text(cell)})")
        row.absolutely_irreducible = absolutely_irreducible(simple)
        row.fingerprint = [str(simple.dim)] + [simple.action[b].trace().text() for b in d.basis()]
    return row


def classify(d: CellDatum, jobs: int | None = None) -> Classification:
    """Table cell -> (dim W, dim L, in Lambda_0), in the datum's cell order."""
    jobs = settings.DEFAULT_JOBS if jobs is None else jobs
    cells = d.cells()
    rows = run_parallel(lambda c: _classify_cell(d, c), cells, jobs)
    warnings = []
    simples = [r for r in rows if r.in_lambda0]
    for i, a in enumerate(simples):
        if a.absolutely_irreducible is False:
            warnings.append(f"L({a.cell}) fails the Burnside criterion over {d.field.descriptor}")
        for b in simples[i + 1:]:
            if a.fingerprint == b.fingerprint:
                warnings.append(f"fingerprints of L({a.cell}) and L({b.cell}) collide; non-isomorphism not certified")
    for w in warnings:
        trace("Repthy", w)
    return Classification(datum=d.name, field=d.field.descriptor, rows=rows, warnings=warnings)


def center_dimension(d: CellDatum) -> int:
    """dim Z(A), computed directly from the multiplication table."""
    basis = d.basis()
    pos = {b: i for i, b in enumerate(basis)}
    n = len(basis)
    rows = []
    for b in basis:
        # coordinates of z*b - b*z as linear forms in the coordinates of z
        block = [[d.field.zero] * n for _ in range(n)]
        for i, bi in enumerate(basis):
            for k, v in d.product(bi, b).terms.items():
                block[pos[k]][i] = block[pos[k]][i] + v
            for k, v in d.product(b, bi).terms.items():
                block[pos[k]][i] = block[pos[k]][i] - v
        rows.extend(block)
    if not rows:
        return 0
    return n - Matrix.from_rows(d.field, rows, n).rank()


def is_semisimple(d: CellDatum) -> bool:
    """Every radical vanishes at this parameter."""
    return all(irreducible_report(d, c).dim_rad == 0 for c in d.cells())
