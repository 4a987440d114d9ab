# conftest.py
import random

import pytest

from config.settings import settings
from procell.cellcore import BasisIndex, CellDatum
from procell.instances import poly_datum, poly_truncation, tableau_tower, tl_datum
from procell.instances.tableaux import content
from procell.scalars import RATIONALS, Field


def content_pairing_datum(n: int, field: Field = RATIONALS) -> CellDatum:
    """
    A small cellular algebra over the tableau tower: C_{S,T} C_{U,V} = <c(T), c(U)> C_{S,V}
    inside one cell and zero across cells, where c is the content vector. The
    Gram form of a cell is the pairing of content vectors, so dim L(shape) is
    the rank of the contents of its tableaux. No unit.
    """
    tower = tableau_tower(n)

    def pairing(t, u) -> int:
        return sum(x * y for x, y in zip(content(t, n), content(u, n)))

    def mult(a: BasisIndex, b: BasisIndex):
        if a.cell != b.cell:
            return {}
        return {BasisIndex(a.cell, a.s, b.t): field(pairing(a.t, b.s))}

    return CellDatum(
        name=f"content-pairing({n})",
        field=field,
        poset=tower.poset,
        tableaux=tower.tableaux,
        mult=mult,
        family="tower",
    )


@pytest.fixture
def q():
    return RATIONALS


@pytest.fixture
def f5():
    return Field(5)


@pytest.fixture
def rng():
    return random.Random(settings.DEFAULT_SEED)


@pytest.fixture
def poly():
    return poly_datum()


@pytest.fixture
def poly4():
    return poly_truncation(4).datum


@pytest.fixture
def tl3():
    return tl_datum(3, 2)


@pytest.fixture
def content_pairing():
    return content_pairing_datum


@pytest.fixture
def data_dir():
    return settings.DATA_DIR
