# procell/datum_io.py
"""
JSON datum files.

    {
      "name": "TL_3(delta=2)",
      "field": "q",
      "poset": {"elements": ["3", "1"], "covers": [["1", "3"]]},
      "tableaux": {"3": ["(-1,-1,-1)"], "1": ["(-1,2,1)", "(1,0,-1)"]},
      "products": [[i, j, [[k, "scalar"], ...]], ...],
      "unit": [[k, "scalar"], ...]
    }

Labels are in their text form. i, j, k are positions in the basis listing
(cells in element order, then S, then T). A pair missing from the table is
left undefined and shows up as a basis failure when the datum is verified.
"""

import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, ValidationError

from . import ProcellError
from .cellcore import BasisIndex, CellDatum
from .posets import FinitePoset
from .scalars import field_from_descriptor
from .utils import label_text, parse_label

Term = Tuple[int, str]


class DatumParseError(ProcellError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.col = col


class PosetBlock(BaseModel):
    elements: List[str]
    covers: List[Tuple[str, str]] = Field(default_factory=list)


class ProductEntry(BaseModel):
    left: int
    right: int
    terms: List[Term]

    @classmethod
    def from_row(cls, row) -> "ProductEntry":
        return cls(left=row[0], right=row[1], terms=row[2])

    def to_row(self) -> list:
        return [self.left, self.right, [list(t) for t in self.terms]]


class DatumFile(BaseModel):
    name: str = "datum"
    field: str = "q"
    poset: PosetBlock
    tableaux: Dict[str, List[str]]
    products: List[ProductEntry]
    unit: Optional[List[Term]] = None

    def to_json(self) -> str:
        doc = self.model_dump(exclude={"products"})
        doc["products"] = [p.to_row() for p in self.products]
        if doc["unit"] is not None:
            doc["unit"] = [list(t) for t in doc["unit"]]
        return json.dumps(doc, indent=2) + "\n"


def parse_datum_file(text: str) -> DatumFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DatumParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from e
    if not isinstance(raw, dict):
        raise DatumParseError("a datum file is a JSON object")
    try:
        rows = raw.get("products", [])
        if not isinstance(rows, list) or any(not isinstance(r, list) or len(r) != 3 for r in rows):
            raise DatumParseError("products must be a list of [i, j, terms] triples")
        raw = dict(raw, products=[ProductEntry.from_row(r) for r in rows])
        return DatumFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(x) for x in first["loc"])
        raise DatumParseError(f"{where}: {first['msg']}") from e


def datum_from_file(doc: DatumFile) -> CellDatum:
    field = field_from_descriptor(doc.field)
    elements = [parse_label(e) for e in doc.poset.elements]
    known = set(doc.poset.elements)
    for a, b in doc.poset.covers:
        if a not in known or b not in known:
            raise DatumParseError(f"cover ({a}, {b}) uses an unknown element")
    poset = FinitePoset.from_covers(elements, [(parse_label(a), parse_label(b)) for a, b in doc.poset.covers], name=doc.name)
    tableaux = {}
    for key, labels in doc.tableaux.items():
        if key not in known:
            raise DatumParseError(f"tableaux given for unknown cell {key}")
        tableaux[parse_label(key)] = tuple(parse_label(t) for t in labels)
    basis = [BasisIndex(c, s, t) for c in elements for s in tableaux.get(c, ()) for t in tableaux.get(c, ())]

    def at(k: int) -> BasisIndex:
        if not 0 <= k < len(basis):
            raise DatumParseError(f"basis position {k} out of range 0..{len(basis) - 1}")
        return basis[k]

    table: dict[tuple[BasisIndex, BasisIndex], dict] = {}
    for entry in doc.products:
        terms: dict[BasisIndex, object] = {}
        for k, c in entry.terms:
            idx = at(k)
            terms[idx] = terms.get(idx, field.zero) + field.parse(c)
        table[(at(entry.left), at(entry.right))] = terms

    def mult(a: BasisIndex, b: BasisIndex):
        try:
            return table[(a, b)]
        except KeyError:
            raise ProcellError(f"no product given for {a.text()} * {b.text()}") from None

    unit = None
    if doc.unit is not None:
        unit = {}
        for k, c in doc.unit:
            unit[at(k)] = field.parse(c)
    return CellDatum(name=doc.name, field=field, poset=poset, tableaux=tableaux, mult=mult, unit=unit, family="file")


def load_datum(source: str | Path) -> CellDatum:
    """Path to a datum file, or the JSON text itself."""
    if isinstance(source, Path) or not source.lstrip().startswith("{"):
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as e:
            raise DatumParseError(f"cannot read {path}: {e.strerror}") from e
    else:
        text = source
    return datum_from_file(parse_datum_file(text))


def export_datum(d: CellDatum) -> DatumFile:
    """The full multiplication table of a finite datum, zero products included."""
    basis = d.basis()
    pos = {b: i for i, b in enumerate(basis)}
    products = []
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            terms = [(pos[k], v.text()) for k, v in d.product(a, b).terms.items()]
            products.append(ProductEntry(left=i, right=j, terms=sorted(terms)))
    unit = None
    if d.has_unit:
        unit = sorted((pos[k], v.text()) for k, v in d.unit_terms().items())
    cells = d.cells()
    covers = d.poset.covers() if isinstance(d.poset, FinitePoset) else []
    return DatumFile(
        name=d.name,
        field=d.field.descriptor,
        poset=PosetBlock(elements=[label_text(c) for c in cells], covers=[(label_text(a), label_text(b)) for a, b in covers]),
        tableaux={label_text(c): [label_text(t) for t in d.tableaux(c)] for c in cells},
        products=products,
        unit=unit,
    )
