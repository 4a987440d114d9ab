import itertools
import random

import pytest

from procell.cellcore import (
    BasisIndex,
    CellDatum,
    DatumMismatchError,
    InconsistencyError,
    InfiniteDatumError,
    MissingUnitError,
    UnknownCellError,
    cell_ideal_check,
    multiply,
    reduce_mod_lt,
    structure_constants,
    verify_cell_datum,
)
from procell.datum_io import load_datum
from procell.instances import poly_truncation, tl_datum
from procell.instances.poly import monomial
from procell.posets import FinitePoset
from procell.scalars import Matrix

CAP_CUP = BasisIndex(0, (1, 0), (1, 0))


def test_poly_multiplication(poly4):
    x1, x2, x3 = (poly4.basis_element(monomial(k)) for k in (1, 2, 3))
    assert x1 * x2 == x3
    # x^5 lies outside the truncation
    assert (x2 * x3).is_zero()


def test_unit_is_neutral(poly4, tl3):
    for d in (poly4, tl3):
        u = d.unit()
        for b in d.basis():
            x = d.basis_element(b)
            assert u * x == x
            assert x * u == x


def test_tl2_loop_factor():
    d = tl_datum(2, 3)
    e = d.basis_element(CAP_CUP)
    assert e * e == e.scale(3)


def test_element_arithmetic(tl3):
    basis = tl3.basis()
    x = tl3.element({basis[1]: 2, basis[2]: "1/2"})
    y = tl3.element({basis[2]: "-1/2", basis[3]: 1})
    assert (x + y).coefficient(basis[2]) == 0
    assert basis[2] not in (x + y).terms
    assert x - x == tl3.zero()
    assert x.star().star() == x
    assert (x * y).star() == y.star() * x.star()
    assert multiply(x, y.scale(3)) == (x * y).scale(3)


def test_elements_of_different_data_do_not_mix(tl3, poly4):
    with pytest.raises(DatumMismatchError):
        tl3.unit() + poly4.unit()


def test_verify_poly_truncation():
    report = verify_cell_datum(poly_truncation(5).datum)
    assert report.ok
    assert [c.name for c in report.checks] == ["basis", "involution", "cell", "associativity"]
    assert all(c.status == "pass" for c in report.checks)


def test_verify_tl3(tl3):
    report = verify_cell_datum(tl3, jobs=2)
    assert report.ok
    assert report.dimension == 5


def test_verify_corrupted_table(data_dir):
    report = verify_cell_datum(load_datum(data_dir / "tl3_corrupted.json"))
    assert not report.ok
    cell = report.check("cell")
    assert cell.status == "fail"
    assert cell.witness


def test_verify_missing_product(q):
    idx = BasisIndex("a", 0, 0)

    def mult(a, b):
        raise KeyError("no table entry")

    d = CellDatum("partial", q, FinitePoset(["a"], []), {"a": (0,)}, mult)
    report = verify_cell_datum(d)
    assert report.check("basis").status == "fail"
    assert report.check("cell").status == "skipped"
    assert idx.text() in report.check("basis").witness


def test_structure_constants_of_unit(tl3):
    for cell in tl3.cells():
        sc = structure_constants(tl3, tl3.unit(), cell)
        assert sc.matrix == Matrix.identity(tl3.field, len(tl3.tableaux(cell)))


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_structure_constants_of_x(q, k):
    d = poly_truncation(2 * k + 2).datum
    sc = structure_constants(d, d.basis_element(monomial(1)), k)
    assert sc.matrix == Matrix.zeros(q, 1, 1)


def test_structure_constants_tl2():
    d = tl_datum(2, 3)
    sc = structure_constants(d, d.basis_element(CAP_CUP), 0)
    assert sc.matrix == Matrix.from_rows(d.field, [[3]])


def test_structure_constants_are_multiplicative(tl3):
    basis = tl3.basis()
    for cell in tl3.cells():
        for a, b in itertools.product(basis, repeat=2):
            xa, xb = tl3.basis_element(a), tl3.basis_element(b)
            left = structure_constants(tl3, xa * xb, cell).matrix
            right = structure_constants(tl3, xa, cell).matrix @ structure_constants(tl3, xb, cell).matrix
            assert left == right


def test_reduce_mod_lt(poly4):
    x3 = poly4.basis_element(monomial(3))
    assert reduce_mod_lt(poly4, x3, 1).is_zero()
    assert reduce_mod_lt(poly4, x3, 3) == x3
    assert reduce_mod_lt(poly4, x3, 4) == x3
    with pytest.raises(UnknownCellError):
        reduce_mod_lt(poly4, x3, 9)


def test_cell_ideal_property(tl3, poly4):
    for d in (tl3, poly4, tl_datum(4, 0)):
        for cell in d.cells():
            assert cell_ideal_check(d, cell) is None


def test_involution_and_associativity_on_basis(tl3):
    basis = tl3.basis()
    for a, b in itertools.product(basis, repeat=2):
        assert tl3.product(a, b).star() == tl3.product(b.star(), a.star())
    for a, b, c in itertools.product(basis, repeat=3):
        xa, xb, xc = (tl3.basis_element(i) for i in (a, b, c))
        assert (xa * xb) * xc == xa * (xb * xc)


def test_infinite_and_unitless_data(poly, q, content_pairing):
    with pytest.raises(InfiniteDatumError):
        poly.cells()
    with pytest.raises(InfiniteDatumError):
        verify_cell_datum(poly)
    with pytest.raises(MissingUnitError):
        content_pairing(2).unit()


def test_inconsistent_structure_constants(data_dir):
    d = load_datum(data_dir / "tl3_corrupted.json")
    with pytest.raises(InconsistencyError) as info:
        structure_constants(d, d.basis_element(d.basis()[1]), 1)
    assert info.value.witness


def _mutated(d: CellDatum, rng: random.Random) -> CellDatum:
    basis = d.basis()
    table = {(a, b): dict(d.product(a, b).terms) for a, b in itertools.product(basis, repeat=2)}
    key = rng.choice([k for k, v in table.items() if v])
    entry = dict(table[key])
    coeffs = sorted({v for v in entry.values()}, key=lambda s: s.text())
    if len(coeffs) >= 2:
        swap = {coeffs[0]: coeffs[1], coeffs[1]: coeffs[0]}
        entry = {k: swap.get(v, v) for k, v in entry.items()}
    else:
        label = rng.choice(sorted(entry, key=lambda k: basis.index(k)))
        entry[label] = entry[label] + 1
    table[key] = entry
    return CellDatum(
        name="mutant",
        field=d.field,
        poset=d.poset,
        tableaux={c: d.tableaux(c) for c in d.cells()},
        mult=lambda a, b: table[(a, b)],
        unit=d.unit_terms(),
    )


@pytest.mark.slow
def test_mutations_are_detected():
    d = tl_datum(3, 2)
    rng = random.Random(2024)
    detected = 0
    for _ in range(200):
        report = verify_cell_datum(_mutated(d, rng))
        failed = [c for c in report.checks if c.status == "fail"]
        if failed:
            assert all(c.witness for c in failed)
            detected += 1
    assert detected >= 198
