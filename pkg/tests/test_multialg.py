import pytest

from qcr.catalog import build_spc, build_tpc
from qcr.multialg import (
    AntiTree,
    MultiAlgebra,
    NotAWeakening,
    Projection,
    enumerate_antitrees,
    format_multialgebra,
    invert_projection,
    is_conv_consistent,
    is_tree_weakening,
    is_weakening,
    mr_compose,
    mr_converse,
    mr_intersect,
    parse_multialgebra,
    plenary_antitrees,
    project,
    projection_closure,
    verify_plenary_antitree,
    weaken,
)
from qcr.relalg import AlgebraFormatError


def test_projection_tables(stc, rcc8, pa):
    assert project(stc.proj(0, 1), rcc8.rel("TPP")) == pa.rel("<")
    assert project(stc.proj(1, 0), pa.rel("<")) == rcc8.rel("DC", "EC", "PO", "TPP", "NTPP")
    assert project(stc.proj(0, 1), rcc8.rel("TPP", "NTPP")) == pa.rel("<")


def test_projection_must_respect_converse(rcc8, pa):
    table = [pa.full] * 8
    table[rcc8.atom_index("TPP")] = pa.bits_of(["<"])
    with pytest.raises(ValueError):
        Projection(rcc8, pa, table)


def test_inverse_projection(stc, pa, rcc8):
    inv = invert_projection(stc.proj(0, 1))
    assert inv.apply_bits(pa.bits_of(["<"])) == rcc8.bits_of(["DC", "EC", "PO", "TPP", "NTPP"])
    assert inv == stc.proj(1, 0)
    tpc = build_tpc(3, pa)
    assert invert_projection(tpc.proj(0, 1)).apply_bits(pa.bits_of(["<"])) == pa.bits_of(["<", "="])
    full = Projection.constant_full(rcc8, pa)
    assert invert_projection(full) == Projection.constant_full(pa, rcc8)


def test_multi_relation_operations(stc):
    r = mr_compose(stc, stc.parse("{TPP} ; {<,=}"), stc.parse("{DC} ; {=}"))
    assert str(r) == "{DC} ; {<,=}"
    assert mr_intersect(stc, stc.empty, stc.parse("{TPP} ; {<}")) == stc.empty
    assert str(mr_converse(stc, stc.parse("{TPP} ; {<}"))) == "{TPPI} ; {>}"


def test_projection_closure_examples(stc, pa):
    assert str(projection_closure(stc, stc.parse("{TPP} ; {<,=}"))) == "{TPP} ; {<}"
    assert projection_closure(stc, stc.parse("{TPP} ; {>}")) == stc.empty
    tpc = build_tpc(3, pa)
    assert projection_closure(tpc, tpc.parse("{<} ; {<,>} ; {>}")) == tpc.empty


def test_conv_consistency(stc):
    assert is_conv_consistent(stc, stc.parse("{TPP} ; {<}"))
    assert not is_conv_consistent(stc, stc.parse("{TPP} ; {>}"))
    assert not is_conv_consistent(stc, stc.parse("{} ; {<}"))


def test_plenary_trees(stc, pa):
    assert verify_plenary_antitree(build_tpc(3, pa), AntiTree.chain(3)).plenary
    for t in enumerate_antitrees(2):
        assert verify_plenary_antitree(stc, t).plenary
    # scales: component 1 finest; towards coarser scales
    spc = build_spc(3, pa)
    assert verify_plenary_antitree(spc, AntiTree.chain(3)).plenary


def test_non_plenary_tree_reports_violation(pa):
    tpc = build_tpc(3, pa)
    t = AntiTree.from_edges(3, [(0, 2), (1, 2)])
    rep = verify_plenary_antitree(tpc, t)
    assert not rep.plenary
    v = rep.violations[0]
    assert {v.source, v.target} <= {0, 1, 2}


def test_antitree_validation():
    with pytest.raises(ValueError):
        AntiTree.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        AntiTree.from_edges(3, [(0, 1)])
    assert len(list(enumerate_antitrees(3))) == 9
    assert len(list(enumerate_antitrees(4))) == 64


def test_weakening(stc, rcc8, pa):
    w = weaken(stc, {(1, 0): Projection.constant_full(pa, rcc8)})
    assert is_weakening(stc, w)
    assert is_tree_weakening(stc, w, AntiTree.from_edges(2, [(0, 1)]))
    assert not is_tree_weakening(stc, w, AntiTree.from_edges(2, [(1, 0)]))
    assert weaken(stc, {}) == stc
    for t in plenary_antitrees(stc):
        assert is_tree_weakening(stc, stc, t)


def test_weakening_must_enlarge(stc, rcc8, pa):
    table = list(stc.proj(0, 1).table)
    table[rcc8.atom_index("TPP")] = pa.bits_of([">"])
    table[rcc8.atom_index("TPPI")] = pa.bits_of(["<"])
    with pytest.raises(NotAWeakening):
        weaken(stc, {(0, 1): Projection(rcc8, pa, table)})


def test_tree_weakening_rejects_edge_change(stc, rcc8, pa):
    w = weaken(stc, {(0, 1): Projection.constant_full(rcc8, pa)})
    assert not is_tree_weakening(stc, w, AntiTree.from_edges(2, [(0, 1)]))


def test_roundtrip(stc, cat):
    again = parse_multialgebra(format_multialgebra(stc), cat.algebras)
    assert again == stc


def test_missing_projection_is_an_error(cat):
    with pytest.raises(AlgebraFormatError):
        parse_multialgebra("multialgebra X\ncomponents RCC8 PA\nprojection 1 2: ALL -> FULL\n", cat.algebras, "x.ma")


def test_mono(pa):
    ma = MultiAlgebra.mono(pa)
    assert ma.m == 1 and ma.projections == {}
