# procell/instances/poly.py
"""
R[x] with the cell datum: cells 0, 1, 2, ... ordered by the reverse of the usual
order, one tableau per cell, C(*, *) = x^k and * the identity map.

Its completion is the power series ring R[[x]].
"""

from sympy import Poly, Symbol, SympifyError, sympify
from sympy.polys.polyerrors import PolynomialError

from config.settings import settings

from .. import ProcellError
from ..cellcore import BasisIndex, CellDatum, Element
from ..posets import reversed_naturals
from ..scalars import RATIONALS, Field

# the single tableau of every cell
STAR = 0

X = Symbol("x")


def monomial(k: int) -> BasisIndex:
    return BasisIndex(k, STAR, STAR)


def poly_datum(field: Field = RATIONALS) -> CellDatum:
    one = field.one

    def mult(a: BasisIndex, b: BasisIndex):
        return {monomial(a.cell + b.cell): one}

    return CellDatum(
        name="poly",
        field=field,
        poset=reversed_naturals(),
        tableaux=lambda cell: (STAR,),
        mult=mult,
        unit={monomial(0): 1},
        family="poly",
    )


def parse_poly_element(d: CellDatum, text: str) -> Element:
    """
    Finite-support element from a polynomial string in x, e.g. "1 - x" or "3/2*x^2 + 1".
    Coefficients must be rational; they are mapped into the datum's field.
    """
    try:
        expr = sympify(text.replace("^", "**"), locals={"x": X})
        p = Poly(expr, X)
    except (SympifyError, PolynomialError, TypeError, ValueError) as e:
        raise ProcellError(f"cannot read {text!r} as a polynomial in x: {e}") from e
    if p.degree() > settings.POLY_MAX_TRUNCATION:
        raise ProcellError(f"degree {p.degree()} exceeds POLY_MAX_TRUNCATION")
    terms = {}
    for (k,), c in p.terms():
        if not c.is_Rational:
            raise ProcellError(f"coefficient {c} of x^{k} is not rational")
        terms[monomial(int(k))] = d.field(int(c.p)) / d.field(int(c.q))
    return d.element(terms)
