# procell/model.py
from pydantic import BaseModel, Field
from typing import Optional, Literal, Dict, Any, List

Status = Literal["pass", "fail", "skipped"]

Extent = Literal["finite", "exceeded"]

REPORT_SCHEMA = 1


class AxiomCheck(BaseModel):
    name: str
    status: Status
    detail: str = ""
    witness: Optional[List[str]] = None  # labels of the offending basis indices


class AxiomReport(BaseModel):
    datum: str
    field: str
    dimension: int
    checks: List[AxiomCheck]

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


class ProfiniteEntry(BaseModel):
    element: str
    status: Extent
    size: int  # |<a>| when finite, the cap otherwise


class ProfiniteReport(BaseModel):
    poset: str
    cap: int
    entries: List[ProfiniteEntry]

    @property
    def ok(self) -> bool:
        return all(e.status == "finite" for e in self.entries)


class ClassificationRow(BaseModel):
    cell: str
    dim_w: int
    dim_l: int
    in_lambda0: bool
    absolutely_irreducible: Optional[bool] = None  # Burnside check on L(cell), None when dim_l = 0
    fingerprint: Optional[List[str]] = None


class Classification(BaseModel):
    datum: str
    field: str
    rows: List[ClassificationRow]
    warnings: List[str] = Field(default_factory=list)

    @property
    def lambda0(self) -> List[str]:
        return [r.cell for r in self.rows if r.in_lambda0]


class SmoothRow(BaseModel):
    cell: str
    dim_l: int


class SmoothClassification(BaseModel):
    datum: str
    bound: List[str]
    rows: List[SmoothRow]
    agrees_with_quotient: bool

    @property
    def cells(self) -> List[str]:
        return [r.cell for r in self.rows]


class CoherenceSummary(BaseModel):
    n: int
    max_boxes: int
    pairs_checked: int
    mapped: int
    zeroed: int
    violations: List[str] = Field(default_factory=list)


class Report(BaseModel):
    schema_version: int = Field(default=REPORT_SCHEMA, serialization_alias="schema")
    command: str
    ok: bool
    seed: Optional[int] = None
    data: Dict[str, Any]
