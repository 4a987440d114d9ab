# procell/completion.py
"""
Finite coideal quotients A_P, the connecting maps between them, and the
completion: elements given by a coefficient oracle on every basis label,
observed only through their projections to the quotients.

Elements of the completion have no global equality; compare them at a
truncation with equal_mod. Oracles must be terminating pure functions, so
what is realized here is the computable part of the completion.
"""

import itertools
import json
import threading
import weakref
from dataclasses import dataclass
from typing import Callable, Iterable, Literal

from config.settings import settings

from . import ProcellError
from .cellcore import BasisIndex, CellDatum, DatumMismatchError, Element, InconsistencyError
from .model import SmoothClassification, SmoothRow
from .posets import Coideal, FinitePoset, as_coideal, principal, profinite_check
from .repthy import MatrixModule, cell_module, classify, simple_module
from .scalars import Matrix, Scalar
from .utils import label_text, parse_label, trace
from .worker import run_parallel


class NonNestedCoidealsError(ProcellError):
    pass


class UndecidablePromiseError(ProcellError):
    pass


class UnknownGeneratorError(ProcellError):
    pass


class NotProfiniteError(ProcellError):
    pass


class QuotientAlgebra:
    """
    A_P = A / I_P for a finite coideal P, with the cell datum inherited from the
    parent: cells P, same tableaux, products computed in the parent with every
    label outside P deleted.
    """

    def __init__(self, parent: CellDatum, coideal: Coideal):
        self.parent = parent
        self.coideal = coideal
        cells = list(coideal)
        poset = FinitePoset.from_predicate(cells, parent.poset.leq, name=f"{parent.poset.name}[{', '.join(coideal.labels())}]")

        def mult(a: BasisIndex, b: BasisIndex):
            return self.project(parent.product(a, b)).terms

        unit = None
        if parent.has_unit:
            unit = {k: v for k, v in parent.unit_terms().items() if k.cell in coideal}
        self.datum = CellDatum(
            name=f"{parent.name}[{', '.join(coideal.labels())}]",
            field=parent.field,
            poset=poset,
            tableaux={c: parent.tableaux(c) for c in cells},
            mult=mult,
            unit=unit,
            family=parent.family,
        )

    @property
    def dimension(self) -> int:
        return len(self.datum.basis())

    def project(self, x: Element) -> Element:
        """psi_P: parent element -> A_P, killing every label whose cell is outside P."""
        if x.datum is self.parent:
            return Element(self.datum, {k: v for k, v in x.terms.items() if k.cell in self.coideal})
        if x.datum is self.datum:
            return x
        raise DatumMismatchError(f"{x.datum.name} is neither {self.parent.name} nor {self.datum.name}")

    def lift(self, x: Element) -> Element:
        """The element of the parent with the same coefficients (a section of psi_P, not a homomorphism)."""
        if x.datum is not self.datum:
            raise DatumMismatchError(f"{x.datum.name} is not {self.datum.name}")
        return Element(self.parent, x.terms)

    def __repr__(self) -> str:
        return f"QuotientAlgebra({self.datum.name}, dim={self.dimension})"


def _as_coideal(d: CellDatum, p: Coideal | Iterable) -> Coideal:
    if isinstance(p, Coideal):
        for c in p.members:
            d.require_cell(c)
        return p
    return as_coideal(d.poset, p)


def quotient(d: CellDatum, p: Coideal | Iterable) -> QuotientAlgebra:
    p = _as_coideal(d, p)
    trace("Completion", f"quotient of {d.name} by the complement of {p!r}")
    return QuotientAlgebra(d, p)


_QUOTIENT_LOCK = threading.Lock()


def cached_quotient(d: CellDatum, p: Coideal | Iterable) -> QuotientAlgebra:
    p = _as_coideal(d, p)
    with _QUOTIENT_LOCK:
        q = d.quotient_cache.get(p.members)
        if q is None:
            q = d.quotient_cache[p.members] = QuotientAlgebra(d, p)
        return q


def truncation(d: CellDatum, top) -> QuotientAlgebra:
    """A_<top>, the quotient by the principal coideal of one cell."""
    return cached_quotient(d, principal(d.poset, top))


class ConnectingMap:
    """psi_{P1,P2}: A_P1 -> A_P2 for P1 containing P2."""

    def __init__(self, source: QuotientAlgebra, target: QuotientAlgebra, steps: tuple["ConnectingMap", ...] = ()):
        if source.parent is not target.parent:
            raise DatumMismatchError("connecting maps need quotients of the same datum")
        if not target.coideal.issubset(source.coideal):
            raise NonNestedCoidealsError(f"{target.coideal!r} is not contained in {source.coideal!r}")
        self.source = source
        self.target = target
        # nonempty for composites: applied in order instead of the direct map
        self.steps = steps

    def apply_index(self, idx: BasisIndex) -> Element:
        if self.steps:
            return self(self.source.datum.basis_element(idx))
        if idx.cell in self.target.coideal:
            return self.target.datum.basis_element(idx)
        return self.target.datum.zero()

    def __call__(self, x: Element) -> Element:
        if x.datum is not self.source.datum:
            raise DatumMismatchError(f"{x.datum.name} is not the source {self.source.datum.name}")
        if self.steps:
            for step in self.steps:
                x = step(x)
            return x
        return Element(self.target.datum, {k: v for k, v in x.terms.items() if k.cell in self.target.coideal})

    def then(self, other: "ConnectingMap") -> "ConnectingMap":
        """self followed by other."""
        if other.source is not self.target:
            raise DatumMismatchError("maps do not compose")
        return ConnectingMap(self.source, other.target, (self.steps or (self,)) + (other.steps or (other,)))

    def homomorphism_failure(self) -> list[str] | None:
        d = self.source.datum
        for a, b in itertools.product(d.basis(), repeat=2):
            if self(d.product(a, b)) != self.apply_index(a) * self.apply_index(b):
                return [a.text(), b.text()]
        return None


def connecting_map(q1: QuotientAlgebra, q2: QuotientAlgebra) -> ConnectingMap:
    """The basis level map, checked to be multiplicative on every basis pair of the source."""
    psi = ConnectingMap(q1, q2)
    witness = psi.homomorphism_failure()
    if witness is not None:
        raise InconsistencyError(f"psi from {q1.datum.name} to {q2.datum.name} is not multiplicative", witness)
    return psi


_GATED: "weakref.WeakKeyDictionary[CellDatum, bool]" = weakref.WeakKeyDictionary()


def require_profinite(d: CellDatum) -> None:
    """Finite data pass; lazy data must show finite <a> for the first cells of their enumeration."""
    if d.is_finite or _GATED.get(d):
        return
    sample = list(itertools.islice(d.poset.iter_elements(), settings.SMOOTH_HALO))
    report = profinite_check(d.poset, sample)
    if not report.ok:
        bad = [e.element for e in report.entries if e.status == "exceeded"]
        raise NotProfiniteError(f"{d.name} is not of profinite type: <{bad[0]}> exceeds {report.cap}")
    _GATED[d] = True


Oracle = Callable[[BasisIndex], "Scalar | int | str"]


class CompletionElement:
    """An element of the completion: one coefficient for every basis label of the parent."""

    def __init__(self, datum: CellDatum, oracle: Oracle, name: str = "element"):
        require_profinite(datum)
        self.datum = datum
        self._oracle = oracle
        self.name = name

    def coefficient(self, idx: BasisIndex) -> Scalar:
        idx = BasisIndex(*idx)
        self.datum.require_cell(idx.cell)
        return self.datum.field(self._oracle(idx))

    def project(self, p: Coideal | Iterable | QuotientAlgebra) -> Element:
        q = p if isinstance(p, QuotientAlgebra) else cached_quotient(self.datum, p)
        return q.datum.element({b: self.coefficient(b) for b in q.datum.basis()})

    def _check(self, other: "CompletionElement") -> None:
        if other.datum is not self.datum:
            raise DatumMismatchError(f"completions of {self.datum.name} and {other.datum.name} cannot be combined")

    def __add__(self, other: "CompletionElement") -> "CompletionElement":
        self._check(other)
        return CompletionElement(self.datum, lambda i: self.coefficient(i) + other.coefficient(i), f"({self.name} + {other.name})")

    def __sub__(self, other: "CompletionElement") -> "CompletionElement":
        self._check(other)
        return CompletionElement(self.datum, lambda i: self.coefficient(i) - other.coefficient(i), f"({self.name} - {other.name})")

    def __neg__(self) -> "CompletionElement":
        return CompletionElement(self.datum, lambda i: -self.coefficient(i), f"-{self.name}")

    def scale(self, c: Scalar | int | str) -> "CompletionElement":
        c = self.datum.field(c)
        return CompletionElement(self.datum, lambda i: c * self.coefficient(i), f"{c.text()}*{self.name}")

    def __mul__(self, other: "CompletionElement") -> "CompletionElement":
        return complete_mul(self, other)

    def __repr__(self) -> str:
        return f"CompletionElement({self.name} over {self.datum.name})"


def project(e: CompletionElement, p: Coideal | Iterable) -> Element:
    return e.project(p)


def complete_mul(e1: CompletionElement, e2: CompletionElement) -> CompletionElement:
    """
    The coefficient at (cell, S, T) is read from project(e1) * project(e2) in
    A_<cell>, the smallest quotient that sees the label. Products are memoized
    per cell.
    """
    e1._check(e2)
    d = e1.datum
    products: dict = {}
    lock = threading.Lock()

    def oracle(idx: BasisIndex) -> Scalar:
        with lock:
            prod = products.get(idx.cell)
        if prod is None:
            q = truncation(d, idx.cell)
            prod = e1.project(q) * e2.project(q)
            with lock:
                products[idx.cell] = prod
        return prod.coefficient(idx)

    return CompletionElement(d, oracle, f"{e1.name}*{e2.name}")


def hat_involution(e: CompletionElement) -> CompletionElement:
    return CompletionElement(e.datum, lambda i: e.coefficient(BasisIndex(*i).star()), f"{e.name}^*")


def in_ideal(e: CompletionElement, p: Coideal | Iterable) -> bool:
    """Membership in the open ideal of elements vanishing on every cell of P."""
    return e.project(p).is_zero()


def equal_mod(e1: CompletionElement, e2: CompletionElement, p: Coideal | Iterable) -> bool:
    return in_ideal(e1 - e2, p)


def embed(x: Element) -> CompletionElement:
    """A finitely supported parent element as an element of the completion."""
    return CompletionElement(x.datum, x.coefficient, x.text())


def truncate(e: CompletionElement, p: Coideal | Iterable) -> Element:
    """The finitely supported parent element agreeing with e on P; e minus it lies in the ideal of P."""
    q = cached_quotient(e.datum, p)
    return q.lift(e.project(q))


# named generators: name -> builder taking the parent datum
GENERATORS: dict[str, Callable[[CellDatum], CompletionElement]] = {}

# finite-support parsers per datum family: family -> (datum, text) -> Element
PARSERS: dict[str, Callable[[CellDatum, str], Element]] = {}


def register_generator(name: str, builder: Callable[[CellDatum], CompletionElement]) -> None:
    GENERATORS[name] = builder


def register_parser(family: str, parser: Callable[[CellDatum, str], Element]) -> None:
    PARSERS[family] = parser


def _unit_generator(d: CellDatum) -> CompletionElement:
    u = d.unit()
    return CompletionElement(d, u.coefficient, "delta")


register_generator("delta", _unit_generator)
register_generator("zero", lambda d: CompletionElement(d, lambda i: d.field.zero, "zero"))


def parse_support_list(d: CellDatum, text: str) -> Element:
    """JSON list of [cell, S, T, scalar] entries, labels in their text form."""
    try:
        entries = json.loads(text)
    except json.JSONDecodeError as e:
        raise UnknownGeneratorError(f"{text!r} is neither a generator name nor a support list") from e
    if not isinstance(entries, list):
        raise UnknownGeneratorError(f"{text!r} is not a support list")
    terms: dict[BasisIndex, Scalar] = {}
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 4:
            raise ProcellError(f"support entry {entry!r} needs [cell, S, T, scalar]")
        idx = BasisIndex(*(parse_label(str(x)) for x in entry[:3]))
        if not d.contains_index(idx):
            raise ProcellError(f"{idx.text()} is not a basis label of {d.name}")
        terms[idx] = terms.get(idx, d.field.zero) + d.field(str(entry[3]))
    return d.element(terms)


def parse_completion_element(d: CellDatum, text: str) -> CompletionElement:
    """A generator name, a family-specific literal such as "1 - x", or a support list."""
    s = text.strip()
    if s in GENERATORS:
        return GENERATORS[s](d)
    if s.startswith("["):
        return embed(parse_support_list(d, s))
    parser = PARSERS.get(d.family)
    if parser is None:
        raise UnknownGeneratorError(f"unknown generator {s!r}; known: {', '.join(sorted(GENERATORS))}")
    return embed(parser(d, s))


class SmoothModuleSpec:
    """A module over A_P pulled back to the completion along psi_P."""

    def __init__(self, parent: CellDatum, quotient_algebra: QuotientAlgebra, module: MatrixModule):
        if quotient_algebra.parent is not parent or module.datum is not quotient_algebra.datum:
            raise DatumMismatchError("module, quotient and parent do not match")
        self.parent = parent
        self.quotient = quotient_algebra
        self.module = module

    @property
    def coideal(self) -> Coideal:
        return self.quotient.coideal

    @property
    def dim(self) -> int:
        return self.module.dim

    def action(self, idx: BasisIndex) -> Matrix:
        idx = BasisIndex(*idx)
        if idx.cell in self.coideal:
            return self.module.action[idx]
        return Matrix.zeros(self.parent.field, self.dim, self.dim)

    def act(self, e: CompletionElement) -> Matrix:
        """Only the projection of e to A_P matters; the ideal of P acts as zero."""
        return self.module.act(e.project(self.quotient))

    def as_module_spec(self) -> "ModuleSpec":
        return ModuleSpec(self.parent, self.coideal, self.dim, self.action, tail="zero", name=self.module.name)


def pullback_cell_module(d: CellDatum, cell) -> SmoothModuleSpec:
    q = truncation(d, cell)
    return SmoothModuleSpec(d, q, cell_module(q.datum, cell))


def pullback_simple_module(d: CellDatum, cell) -> SmoothModuleSpec:
    q = truncation(d, cell)
    return SmoothModuleSpec(d, q, simple_module(q.datum, cell))


Tail = Literal["zero", "nonzero"]


@dataclass
class ModuleSpec:
    """
    A finite dimensional module over the completion: matrices for the parent's
    basis labels, given exactly on the window and by a promise outside it.
    """

    parent: CellDatum
    window: Coideal
    dim: int
    action: Callable[[BasisIndex], Matrix]
    tail: Tail | None = None
    name: str = "module"


def _halo(spec: ModuleSpec, size: int) -> list:
    outside = (c for c in spec.parent.poset.iter_elements() if c not in spec.window)
    return list(itertools.islice(outside, size))


def smooth_check(spec: ModuleSpec, p_hint: Coideal | None = None, halo: int | None = None) -> bool:
    """
    True iff every basis label outside some finite coideal acts as zero.

    The window is exact; outside it the tail promise decides, after being
    tested on the first `halo` cells beyond the window. p_hint names a smaller
    candidate coideal whose complement inside the window is checked exhaustively.
    """
    halo = settings.SMOOTH_HALO if halo is None else halo
    if spec.dim == 0:
        return True
    if spec.tail is None:
        raise UndecidablePromiseError(f"{spec.name} carries no promise for labels outside {spec.window!r}")
    d = spec.parent
    probes = [b for c in _halo(spec, halo) for b in d.basis([c])]
    nonzero = [b for b in probes if not spec.action(b).is_zero()]
    if spec.tail == "zero":
        if nonzero:
            raise InconsistencyError(f"{spec.name} promised zero outside {spec.window!r}", [nonzero[0].text()])
        if p_hint is not None:
            inside = d.basis([c for c in spec.window if c not in p_hint])
            if all(spec.action(b).is_zero() for b in inside):
                trace("Completion", f"{spec.name}: the ideal of {p_hint!r} already acts as zero")
            else:
                trace("Completion", f"{spec.name}: {p_hint!r} is too small, the window {spec.window!r} witnesses smoothness")
        return True
    if not nonzero:
        raise InconsistencyError(f"{spec.name} promised nonzero labels outside {spec.window!r}, none found", [b.text() for b in probes[:3]])
    return False


def _smooth_row(d: CellDatum, cell) -> SmoothRow | None:
    pulled = pullback_simple_module(d, cell)
    if pulled.dim == 0:
        return None
    if not smooth_check(pulled.as_module_spec()):
        raise InconsistencyError(f"pulled back L({label_text(cell)}) is not smooth", [label_text(cell)])
    return SmoothRow(cell=label_text(cell), dim_l=pulled.dim)


def smooth_classify(d: CellDatum, bound: Coideal | Iterable, jobs: int | None = None) -> SmoothClassification:
    """
    The absolutely irreducible smooth modules seen inside the working window:
    one L(cell) for every cell of the bound with a nonzero Gram form, each
    computed in its own A_<cell> and pulled back. The result is compared with
    the classification of the finite algebra A_bound.
    """
    require_profinite(d)
    q = cached_quotient(d, bound)
    cells = list(q.coideal)
    rows = [r for r in run_parallel(lambda c: _smooth_row(d, c), cells, jobs) if r is not None]
    finite = classify(q.datum, jobs)
    expected = {(r.cell, r.dim_l) for r in finite.rows if r.in_lambda0}
    agrees = expected == {(r.cell, r.dim_l) for r in rows}
    if not agrees:
        trace("Completion", f"smooth classification of {d.name} disagrees with {q.datum.name}")
    return SmoothClassification(datum=d.name, bound=q.coideal.labels(), rows=rows, agrees_with_quotient=agrees)

