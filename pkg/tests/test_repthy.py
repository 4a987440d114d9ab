import itertools
import json

import pytest

from procell.datum_io import load_datum
from procell.instances import poly_truncation, tl_datum
from procell.instances.tl import half_diagrams
from procell.repthy import (
    EmptyCellError,
    ZeroModuleError,
    absolutely_irreducible,
    cell_module,
    center_dimension,
    classify,
    gram,
    irreducible_report,
    is_semisimple,
    quotient_module,
    simple_module,
    submodule_check,
)
from procell.scalars import DimensionMismatchError, Matrix


def test_cell_module_dimensions(poly4, tl3):
    assert cell_module(poly4, 2).dim == 1
    assert cell_module(tl3, 1).dim == 2
    assert cell_module(tl3, 3).dim == 1
    assert cell_module(tl_datum(4, 1), 0).dim == 2
    assert cell_module(tl_datum(4, 1), 2).dim == 3


def test_gram_poly(poly4, q):
    assert gram(poly4, 0).matrix == Matrix.from_rows(q, [[1]])
    # x^k * x^k lands in a lower cell for k >= 1
    for k in (1, 2, 3, 4):
        assert gram(poly4, k).matrix == Matrix.from_rows(q, [[0]])


def test_gram_tl2():
    d = tl_datum(2, 3)
    assert gram(d, 0).matrix == Matrix.from_rows(d.field, [[3]])
    assert gram(d, 2).matrix == Matrix.from_rows(d.field, [[1]])


@pytest.mark.parametrize("delta", [0, 1, 2, 3, "1/2"])
def test_gram_tl3(delta):
    d = tl_datum(3, delta)
    g = gram(d, 1)
    a, b = half_diagrams(3, 1)
    dv = d.field(delta)
    assert g.value(a, a) == dv
    assert g.value(a, b) == 1
    assert g.matrix == Matrix.from_rows(d.field, [[dv, 1], [1, dv]])
    assert g.determinant() == dv * dv - 1


def test_gram_is_symmetric():
    for n, delta in itertools.product((2, 3, 4), (0, 1, 2)):
        d = tl_datum(n, delta)
        for cell in d.cells():
            m = gram(d, cell).matrix
            assert m == m.transpose()


def test_irreducible_reports():
    rep = irreducible_report(tl_datum(3, 1), 1)
    assert (rep.dim_w, rep.dim_l, rep.dim_rad) == (2, 1, 1)
    assert rep.in_lambda0
    rep = irreducible_report(tl_datum(3, 2), 1)
    assert (rep.dim_l, rep.dim_rad) == (2, 0)
    rep = irreducible_report(tl_datum(2, 0), 0)
    assert not rep.in_lambda0


def test_rank_plus_radical_is_dimension():
    for n, delta in itertools.product((2, 3, 4), (0, 1, 2)):
        d = tl_datum(n, delta)
        for cell in d.cells():
            rep = irreducible_report(d, cell)
            assert rep.dim_l + rep.dim_rad == rep.dim_w == len(d.tableaux(cell))


def test_submodule_check(q):
    w1 = cell_module(tl_datum(3, 1), 1)
    rad = irreducible_report(tl_datum(3, 1), 1).rad
    assert submodule_check(w1, rad)
    assert submodule_check(w1, [(1, 0), (0, 1)])
    assert submodule_check(w1, [])
    w2 = cell_module(tl_datum(3, 2), 1)
    assert not submodule_check(w2, [(1, 0)])
    with pytest.raises(DimensionMismatchError):
        submodule_check(w2, [(1, 0, 0)])


def test_radical_is_invariant():
    for n, delta in itertools.product((3, 4), (0, 1)):
        d = tl_datum(n, delta)
        for cell in d.cells():
            assert submodule_check(cell_module(d, cell), irreducible_report(d, cell).rad)


def test_action_is_multiplicative(tl3):
    w = cell_module(tl3, 1)
    basis = tl3.basis()
    for a, b in itertools.product(basis, repeat=2):
        xa, xb = tl3.basis_element(a), tl3.basis_element(b)
        assert w.act(xa * xb) == w.act(xa) @ w.act(xb)
    assert w.act(tl3.unit()) == Matrix.identity(tl3.field, 2)


def test_quotient_module_of_radical():
    d = tl_datum(3, 1)
    w = cell_module(d, 1)
    simple = quotient_module(w, irreducible_report(d, 1).rad)
    assert simple.dim == 1
    basis = d.basis()
    for a, b in itertools.product(basis, repeat=2):
        xa, xb = d.basis_element(a), d.basis_element(b)
        assert simple.act(xa * xb) == simple.act(xa) @ simple.act(xb)


def test_absolutely_irreducible(poly4):
    assert absolutely_irreducible(simple_module(tl_datum(3, 2), 1))
    assert not absolutely_irreducible(cell_module(tl_datum(3, 1), 1))
    assert absolutely_irreducible(simple_module(tl_datum(3, 1), 1))
    assert absolutely_irreducible(simple_module(poly4, 0))
    with pytest.raises(ZeroModuleError):
        absolutely_irreducible(simple_module(poly4, 1))


def test_classify_tl3(tl3):
    result = classify(tl3, jobs=2)
    assert [(r.cell, r.dim_w, r.dim_l) for r in result.rows] == [("3", 1, 1), ("1", 2, 2)]
    assert result.lambda0 == ["3", "1"]
    assert all(r.absolutely_irreducible for r in result.rows)
    assert result.warnings == []


def test_classify_tl3_at_one():
    result = classify(tl_datum(3, 1))
    assert [r.dim_l for r in result.rows] == [1, 1]


def test_classify_tl2_at_zero():
    result = classify(tl_datum(2, 0))
    assert result.lambda0 == ["2"]
    row = result.rows[1]
    assert (row.cell, row.in_lambda0, row.absolutely_irreducible) == ("0", False, None)


def test_classify_poly_truncation():
    result = classify(poly_truncation(5).datum)
    assert result.lambda0 == ["0"]
    assert len(result.rows) == 6


def test_classify_over_a_prime_field(f5):
    # delta = 1 mod 5 shares the radical pattern of delta = 1
    result = classify(tl_datum(3, 6, f5))
    assert result.field == "gf:5"
    assert [r.dim_l for r in result.rows] == [1, 1]


@pytest.mark.parametrize("n, delta", [(2, 3), (3, 2), (3, 3), (4, 2)])
def test_center_counts_simples_when_semisimple(n, delta):
    d = tl_datum(n, delta)
    assert is_semisimple(d)
    assert center_dimension(d) == len(classify(d).lambda0)


def test_center_and_semisimplicity(tl3):
    assert is_semisimple(tl3)
    assert not is_semisimple(tl_datum(3, 1))
    assert not is_semisimple(poly_truncation(3).datum)


def test_gram_of_an_empty_cell():
    doc = {
        "name": "empty cell",
        "poset": {"elements": ["(2)", "(1,1)"], "covers": [["(2)", "(1,1)"]]},
        "tableaux": {"(2)": ["[[1,2]]"], "(1,1)": []},
        "products": [[0, 0, []]],
    }
    d = load_datum(json.dumps(doc))
    empty = next(c for c in d.cells() if not d.tableaux(c))
    with pytest.raises(EmptyCellError, match=r"M\(\(1,1\)\) is empty"):
        gram(d, empty)
