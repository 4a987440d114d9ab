import itertools

import pytest

from config.settings import settings
from procell import ProcellError
from procell.cellcore import verify_cell_datum
from procell.completion import cached_quotient
from procell.instances import build_builtin, poly_truncation, tableau_tower, tl_datum
from procell.instances.tableaux import (
    RowCountError,
    ShapeMismatchError,
    brute_force_ssyt_count,
    column_removal,
    content,
    dominates,
    enumerate_ssyt,
    is_semistandard,
    partitions,
    strip_full_columns,
)
from procell.instances.tl import BoundExceededError, TLDiagram, catalan, half_diagrams, tl_basis_diagrams
from procell.posets import principal, profinite_check
from procell.repthy import classify
from procell.scalars import Field


@pytest.mark.parametrize("n", range(1, 7))
def test_tl_dimension_is_catalan(n):
    assert len(tl_basis_diagrams(n)) == catalan(n)
    assert sum(len(half_diagrams(n, k)) ** 2 for k in range(n, -1, -2)) == catalan(n)
    assert len(set(tl_basis_diagrams(n))) == catalan(n)


def test_half_diagrams_of_three():
    assert half_diagrams(3, 1) == [(-1, 2, 1), (1, 0, -1)]
    assert half_diagrams(3, 3) == [(-1, -1, -1)]
    assert half_diagrams(3, 2) == []


def test_tl_bounds():
    with pytest.raises(BoundExceededError):
        tl_datum(0)
    with pytest.raises(BoundExceededError):
        tl_datum(settings.TL_MAX_N + 1)
    with pytest.raises(BoundExceededError):
        poly_truncation(-1)
    with pytest.raises(BoundExceededError):
        tableau_tower(1)
    with pytest.raises(BoundExceededError):
        tableau_tower(settings.TOWER_MAX_N + 1)


def test_crossing_diagrams_are_rejected():
    with pytest.raises(ProcellError, match="crossing"):
        TLDiagram(2, (3, 2, 1, 0))
    with pytest.raises(ProcellError, match="perfect matching"):
        TLDiagram(2, (1, 0, 2, 3))


def test_generator_relations():
    n = 4
    e = [TLDiagram.generator(n, i) for i in range(n - 1)]
    for g in e:
        assert g.compose(g) == (g, 1)
        assert g.through_strands() == n - 2
        assert g.flip() == g
    for i in range(n - 2):
        assert e[i].compose(e[i + 1])[0].compose(e[i]) == (e[i], 0)
        assert e[i + 1].compose(e[i])[0].compose(e[i + 1]) == (e[i + 1], 0)
    assert e[0].compose(e[2]) == e[2].compose(e[0])
    ident = TLDiagram.identity(n)
    assert ident.compose(e[1]) == (e[1], 0)


def test_flip_reverses_products():
    for a, b in itertools.product(tl_basis_diagrams(3), repeat=2):
        ab, loops = a.compose(b)
        ba, loops2 = b.flip().compose(a.flip())
        assert ba == ab.flip()
        assert loops == loops2


def test_render():
    assert TLDiagram.identity(2).render() == "t0-b0 t1-b1"
    assert TLDiagram.generator(2, 0).render() == "t0-t1 b0-b1"


def test_build_builtin():
    assert build_builtin("tl", n=3, delta="2").name == "TL_3(delta=2)"
    assert build_builtin("poly").family == "poly"
    with pytest.raises(ProcellError, match="no multiplication"):
        build_builtin("tower", n=3)
    with pytest.raises(ProcellError):
        build_builtin("tl")
    with pytest.raises(ProcellError):
        build_builtin("matrix")


@pytest.mark.slow
@pytest.mark.parametrize("field", [Field(0), Field(5)])
@pytest.mark.parametrize("delta", [0, 1, 2, 3])
@pytest.mark.parametrize("n", range(1, 6))
def test_tl_sweep_verifies(n, delta, field):
    report = verify_cell_datum(tl_datum(n, delta, field))
    assert report.ok, [c for c in report.checks if c.status != "pass"]


@pytest.mark.parametrize("k", range(9))
def test_poly_truncations(k):
    d = poly_truncation(k).datum
    assert len(d.basis()) == k + 1
    assert verify_cell_datum(d).ok
    assert classify(d).lambda0 == ["0"]


def test_partitions():
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert partitions(0) == [()]
    assert partitions(5, max_rows=2) == [(5,), (4, 1), (3, 2)]
    assert [len(partitions(r)) for r in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_dominance():
    assert dominates((3, 1), (2, 2))
    assert not dominates((2, 2), (3, 1))
    assert not dominates((3, 3), (4, 1, 1)) and not dominates((4, 1, 1), (3, 3))
    assert not dominates((2,), (1,))


def test_ssyt_counts():
    assert len(enumerate_ssyt((2, 1), 3)) == 8 == brute_force_ssyt_count((2, 1), 3)
    for n in (2, 3, 4):
        assert len(enumerate_ssyt((1,), n)) == n
    assert enumerate_ssyt((), 3) == [()]
    assert enumerate_ssyt((1, 1, 1), 3, allow_full=True) == [((1,), (2,), (3,))]


def test_ssyt_row_limits():
    with pytest.raises(RowCountError):
        enumerate_ssyt((1, 1, 1), 3)
    with pytest.raises(RowCountError):
        enumerate_ssyt((1, 1, 1, 1), 3, allow_full=True)
    with pytest.raises(ShapeMismatchError):
        enumerate_ssyt((1, 2), 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ssyt_against_brute_force(n):
    for r in range(7):
        for shape in partitions(r, max_rows=n):
            found = enumerate_ssyt(shape, n, allow_full=True)
            assert len(found) == brute_force_ssyt_count(shape, n)
            assert len(set(found)) == len(found)
            assert all(is_semistandard(t, n) for t in found)


def test_content():
    assert content(((1, 1, 2), (2,)), 3) == (2, 2, 0)


def test_column_removal():
    s = ((1, 1), (2,))
    t = ((1, 2), (2,))
    assert column_removal(s, t, 2) == (((1,),), ((2,),))
    assert column_removal(((1, 2),), ((1, 1),), 2) is None
    assert column_removal(((1,), (2,)), ((1,), (2,)), 2) == ((), ())
    with pytest.raises(ShapeMismatchError):
        column_removal(((1, 1),), ((1,), (2,)), 2)
    with pytest.raises(ProcellError):
        column_removal(((2, 1),), ((1, 1),), 2)


def test_strip_full_columns():
    assert strip_full_columns((3, 2, 2), 3) == (1,)
    assert strip_full_columns((2, 1), 3) == (2, 1)
    assert strip_full_columns((2, 2), 2) == ()


def test_tower_order():
    t3 = tableau_tower(3)
    assert t3.leq((2, 2), (1,))
    assert not t3.leq((1,), (2, 2))
    assert not t3.poset.contains((1, 1, 1))
    assert set(t3.up_set((2, 2))) == {(2, 2), (1,)}
    t2 = tableau_tower(2)
    assert t2.leq((4,), (2,)) and t2.leq((4,), ())
    assert not t2.leq((3,), (2,))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tower_up_sets_match_brute_force(n):
    tower = tableau_tower(n)
    for r in range(7):
        for a in partitions(r, max_rows=n - 1):
            expected = {b for s in range(r + 1) for b in partitions(s, max_rows=n - 1) if tower.leq(a, b)}
            assert set(tower.up_set(a)) == expected
            assert a in expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_tower_is_profinite(n):
    tower = tableau_tower(n)
    sample = list(itertools.islice(tower.iter_shapes(), 20))
    assert profinite_check(tower.poset, sample).ok


@pytest.mark.parametrize("n", [2, 3])
def test_column_removal_is_coherent(n):
    summary = tableau_tower(n).coherence_check(4)
    assert summary.violations == []
    assert summary.pairs_checked == summary.mapped + summary.zeroed
    assert summary.mapped > 0 and summary.zeroed > 0


def test_content_pairing_quotient_verifies(content_pairing):
    d = content_pairing(3)
    q = cached_quotient(d, principal(d.poset, (2, 1)))
    assert q.coideal.members == {(2, 1), ()}
    report = verify_cell_datum(q.datum)
    assert report.ok
    rows = {r.cell: r.dim_l for r in classify(q.datum).rows}
    # contents of the eight tableaux of (2,1) span all of Q^3
    assert rows == {"(2,1)": 3, "()": 0}
