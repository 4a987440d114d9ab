# procell/instances/__init__.py
"""
Built-in cell data and the registry the command line builds them from.
"""

from config.settings import settings

from .. import ProcellError
from ..cellcore import CellDatum
from ..completion import CompletionElement, QuotientAlgebra, register_generator, register_parser, truncation
from ..scalars import RATIONALS, Field
from .poly import parse_poly_element, poly_datum
from .tableaux import tableau_tower
from .tl import BoundExceededError, tl_datum

BUILTINS = ("poly", "tl", "tower")


def _geometric(d: CellDatum) -> CompletionElement:
    # every coefficient 1; for the polynomial datum this is sum_k x^k = 1/(1 - x)
    return CompletionElement(d, lambda idx: d.field.one, "geometric")


register_generator("geometric", _geometric)
register_parser("poly", parse_poly_element)


def build_builtin(name: str, n: int | None = None, delta: str = "1", field: Field = RATIONALS) -> CellDatum:
    """The full datum of a builtin; poly is lazy, tl is finite. The tower has labels only."""
    if name == "poly":
        return poly_datum(field)
    if name == "tl":
        if n is None:
            raise ProcellError("--builtin tl needs --n")
        return tl_datum(n, delta, field)
    if name == "tower":
        if n is None:
            raise ProcellError("--builtin tower needs --n")
        raise ProcellError(f"the tableau tower for n={n} has no multiplication; use tableau_tower for its labels")
    raise ProcellError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


def poly_truncation(k: int, field: Field = RATIONALS) -> QuotientAlgebra:
    """k[x]/(x^(k+1)) as the quotient by <k>."""
    if not 0 <= k <= settings.POLY_MAX_TRUNCATION:
        raise BoundExceededError(f"truncation must lie in 0..{settings.POLY_MAX_TRUNCATION}, got {k}")
    return truncation(poly_datum(field), k)


__all__ = [
    "BUILTINS",
    "build_builtin",
    "poly_datum",
    "poly_truncation",
    "tl_datum",
    "tableau_tower",
]
