# procell/scalars.py
"""
Exact field arithmetic and exact linear algebra.

Field elements come from sympy's QQ and GF(p) domains; dense row reduction,
products and inverses go through sympy's DDM. Every Scalar carries its
Field, and binary operations refuse to mix fields.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices.ddm import DDM

from . import ProcellError


class FieldMismatchError(ProcellError):
    pass


class DivisionByZeroError(ProcellError, ZeroDivisionError):
    pass


class DimensionMismatchError(ProcellError):
    pass


@dataclass(frozen=True)
class Field:
    """Ground field descriptor: characteristic 0 means the rationals, otherwise F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not isprime(p):
            raise ProcellError(f"gf:{p} is not a prime field")

    @cached_property
    def domain(self):
        return QQ if self.characteristic == 0 else GF(self.characteristic)

    @property
    def descriptor(self) -> str:
        return "q" if self.characteristic == 0 else f"gf:{self.characteristic}"

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, self.domain.zero)

    @property
    def one(self) -> "Scalar":
        return Scalar(self, self.domain.one)

    def __call__(self, value: Any) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatchError(f"{value} lives in {value.field.descriptor}, not {self.descriptor}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            return self(value.numerator) / self(value.denominator)
        if isinstance(value, int):
            return Scalar(self, self.domain.convert(value))
        raise TypeError(f"cannot build a scalar of {self.descriptor} from {value!r}")

    def parse(self, text: str) -> "Scalar":
        """
        Text format: "num/den" (den optional) for rationals, decimal residue for F_p.
        F_p also accepts "num/den" and reduces it.
        """
        s = text.strip()
        try:
            if "/" in s:
                num, den = s.split("/", 1)
                return self(int(num)) / self(int(den))
            return self(int(s))
        except ValueError as e:
            raise ProcellError(f"bad scalar literal {text!r}: {e}") from e

    def __str__(self) -> str:
        return self.descriptor


RATIONALS = Field(0)


def field_from_descriptor(descriptor: str) -> Field:
    d = descriptor.strip().lower()
    if d in ("q", "qq", "rationals"):
        return RATIONALS
    if d.startswith("gf:"):
        try:
            return Field(int(d[3:]))
        except ValueError as e:
            raise ProcellError(f"bad field descriptor {descriptor!r}") from e
    raise ProcellError(f"unknown field descriptor {descriptor!r} (expected q or gf:p)")


class Scalar:
    """An exact element of a Field. Immutable and hashable."""

    __slots__ = ("field", "value", "_key")

    def __init__(self, field: Field, value: Any):
        self.field = field
        self.value = value
        dom = field.domain
        if field.characteristic == 0:
            self._key = (int(dom.numer(value)), int(dom.denom(value)))
        else:
            self._key = int(dom.to_sympy(value)) % field.characteristic

    def _coerce(self, other: Any) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"cannot combine {self.field.descriptor} with {other.field.descriptor}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.value + o.value)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.value - o.value)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, o.value - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Scalar(self.field, self.value * o.value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __neg__(self):
        return Scalar(self.field, -self.value)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        for _ in range(k):
            result = result * self
        return result

    def inverse(self) -> "Scalar":
        if not self:
            raise DivisionByZeroError(f"zero has no inverse in {self.field.descriptor}")
        return Scalar(self.field, self.field.domain.one / self.value)

    def __bool__(self) -> bool:
        return self._key != 0 and self._key != (0, 1)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self._key == other._key
        if isinstance(other, int):
            return self == self.field(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.characteristic, self._key))

    def text(self) -> str:
        if self.field.characteristic:
            return str(self._key)
        num, den = self._key
        return str(num) if den == 1 else f"{num}/{den}"

    def __str__(self) -> str:
        return self.text()

    def __repr__(self) -> str:
        return f"Scalar({self.text()!r}, {self.field.descriptor})"


def scalar_inv(x: Scalar) -> Scalar:
    return x.inverse()


Vector = tuple[Scalar, ...]


class Matrix:
    """
    Immutable dense matrix over a Field.
    Entries are stored as raw domain elements so DDM can work on them directly.
    """

    __slots__ = ("field", "rows", "cols", "_data")

    def __init__(self, field: Field, rows: int, cols: int, data: Sequence[Sequence[Any]]):
        self.field = field
        self.rows = rows
        self.cols = cols
        self._data = tuple(tuple(r) for r in data)
        if len(self._data) != rows or any(len(r) != cols for r in self._data):
            raise DimensionMismatchError(f"data does not match shape {rows}x{cols}")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Any]], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = [[field(x).value for x in r] for r in rows]
        return cls(field, len(rows), cols, data)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence[Any]], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls.from_rows(field, [[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        z = field.domain.zero
        return cls(field, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        dom = field.domain
        return cls(field, n, n, [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)])

    @classmethod
    def _from_ddm(cls, field: Field, m: DDM) -> "Matrix":
        rows, cols = m.shape
        return cls(field, rows, cols, [list(m[i]) for i in range(rows)])

    def _ddm(self) -> DDM:
        return DDM([list(r) for r in self._data], (self.rows, self.cols), self.field.domain)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.field, self._data[i][j])

    def row(self, i: int) -> Vector:
        return tuple(Scalar(self.field, x) for x in self._data[i])

    def column(self, j: int) -> Vector:
        return tuple(Scalar(self.field, self._data[i][j]) for i in range(self.rows))

    def to_text(self) -> list[list[str]]:
        return [[s.text() for s in self.row(i)] for i in range(self.rows)]

    def _check_same_field(self, other: "Matrix") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"cannot combine {self.field.descriptor} and {other.field.descriptor} matrices")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix._from_ddm(self.field, self._ddm().matmul(other._ddm()))

    def apply(self, v: Sequence[Scalar]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatchError(f"vector of length {len(v)} against {self.cols} columns")
        out = []
        for i in range(self.rows):
            acc = self.field.domain.zero
            for a, x in zip(self._data[i], v):
                acc += a * self.field(x).value
            out.append(Scalar(self.field, acc))
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same_field(other)
        if self.shape != other.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.field, self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(self.field(-1))

    def scale(self, c: Scalar) -> "Matrix":
        c = self.field(c)
        return Matrix(self.field, self.rows, self.cols, [[c.value * a for a in r] for r in self._data])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows,
                      [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(rows), len(cols), [[self._data[i][j] for j in cols] for i in rows])

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise DimensionMismatchError("trace of a non-square matrix")
        acc = self.field.zero
        for i in range(self.rows):
            acc = acc + self.entry(i, i)
        return acc

    def is_zero(self) -> bool:
        return all(not x for r in self._data for x in r)

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns (first nonzero pivot)."""
        if self.rows == 0 or self.cols == 0:
            return self, []
        reduced, pivots = self._ddm().rref()
        return Matrix._from_ddm(self.field, reduced), list(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[Vector]:
        """Basis of {v : M v = 0}, one vector per non-pivot column."""
        reduced, pivots = self.rref()
        one, zero = self.field.one, self.field.zero
        basis = []
        for f in range(self.cols):
            if f in pivots:
                continue
            v = [zero] * self.cols
            v[f] = one
            for i, p in enumerate(pivots):
                v[p] = -reduced.entry(i, f)
            basis.append(tuple(v))
        return basis

    def left_nullspace(self) -> list[Vector]:
        return self.transpose().nullspace()

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatchError("inverse of a non-square matrix")
        if self.rows == 0:
            return self
        if self.rank() != self.rows:
            raise DivisionByZeroError("matrix is singular")
        return Matrix._from_ddm(self.field, self._ddm().inv())

    def determinant(self) -> Scalar:
        if self.rows != self.cols:
            raise DimensionMismatchError("determinant of a non-square matrix")
        if self.rows == 0:
            return self.field.one
        return Scalar(self.field, self._ddm().det())

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.field, self.shape, self._data))

    def __repr__(self) -> str:
        return f"Matrix({self.to_text()}, {self.field.descriptor})"


def rank(m: Matrix) -> int:
    return m.rank()


def rank_nullspace(m: Matrix) -> tuple[int, list[Vector]]:
    _, pivots = m.rref()
    return len(pivots), m.nullspace()


def span_rank(field: Field, vectors: Iterable[Sequence[Scalar]], length: int) -> int:
    rows = [list(v) for v in vectors]
    if any(len(r) != length for r in rows):
        raise DimensionMismatchError(f"expected vectors of length {length}")
    if not rows:
        return 0
    return Matrix.from_rows(field, rows, length).rank()


def span_dimension(ms: Sequence[Matrix], n: int) -> int:
    """Dimension of the linear span of n x n matrices inside the n^2-dimensional matrix space."""
    for m in ms:
        if m.shape != (n, n):
            raise DimensionMismatchError(f"expected {n}x{n} matrices, got {m.rows}x{m.cols}")
    if not ms or n == 0:
        return 0
    field = ms[0].field
    flat = [[m.entry(i, j) for i in range(n) for j in range(n)] for m in ms]
    return span_rank(field, flat, n * n)
