import shutil

import pytest

from qcr.catalog import (
    CatalogError,
    Catalog,
    build_spc,
    build_tpc,
    closure_defects,
    data_dir,
    loose_integration,
)
from qcr.relalg import AlgebraFormatError, check_axioms


def test_contents(cat):
    assert cat.algebra("RCC8").n == 8
    assert set(cat.algebras) >= {"PA", "RCC8"}
    for a in cat.algebras.values():
        assert check_axioms(a).ok


def test_pa_s(cat, pa):
    rels = cat.subclass("PA_s").slices[0]
    assert len(rels) == 6
    assert {pa.format_bits(r) for r in rels} == {"{}", "{<}", "{=}", "{>}", "{<,>}", "{<,=,>}"}


def test_rcc8_s_transcription(cat):
    S = cat.subclass("RCC8_s")
    # 32 rows of two columns, all distinct, plus the empty relation
    assert any("64 distinct" in n for n in S.notes)
    assert len(S.slices[0]) == 65
    assert closure_defects(cat.algebra("RCC8"), S.slices[0]) == []


@pytest.mark.parametrize("name,size", [("C8", 158), ("H8", 148), ("Q8", 160), ("N", 72), ("NP8", 76), ("P8", 180)])
def test_rcc8_subclass_sizes(cat, name, size):
    assert len(cat.subclass(name).slices[0]) == size


@pytest.mark.parametrize("name", ["PA_s", "RCC8_s", "H8", "Q8", "C8"])
def test_subclasses_closed(cat, name):
    S = cat.subclass(name)
    assert closure_defects(S.ma.components[0], S.slices[0]) == []


def test_refinements(cat, pa):
    h = cat.refinement("h_max")
    assert h(pa.full) == pa.bits_of(["<", ">"])
    assert h(pa.bits_of(["<", "="])) == pa.bits_of(["<"])
    for name in ("h_max", "h_H8", "h_Q8", "h_C8"):
        assert cat.refinement(name).problems() == []


def test_h8_first_case(cat, rcc8):
    h = cat.refinement("h_H8")
    assert h(rcc8.bits_of(["DC", "EC"])) == rcc8.bits_of(["DC"])


def test_completeness(cat):
    assert cat.completeness_for(cat.multialgebra("STC")) is not None
    assert cat.completeness_for(cat.multialgebra("PA")) is not None
    assert cat.completeness_for(cat.multialgebra("TPC3")) is None


def test_stc_symmetric(stc):
    for b in range(8):
        for a in range(3):
            fwd = (stc.proj(0, 1).table[b] >> a) & 1
            back = (stc.proj(1, 0).table[a] >> b) & 1
            assert fwd == back


def test_tpc(pa):
    tpc = build_tpc(3, pa)
    lt = pa.bits_of(["<"])
    assert tpc.proj(0, 1).apply_bits(lt) == pa.bits_of(["<", "="])
    assert tpc.proj(0, 2).apply_bits(lt) == pa.full
    assert build_tpc(1, pa).m == 1
    with pytest.raises(ValueError):
        build_tpc(0, pa)


def test_spc(pa):
    spc = build_spc(2, pa, [(0, 1)])
    assert spc.proj(0, 1).apply_bits(pa.bits_of(["<"])) == pa.bits_of(["<", "="])
    assert spc.proj(1, 0).apply_bits(pa.bits_of(["="])) == pa.full


def test_loose_integration(stc, rcc8, pa):
    overlap = {}
    for b in range(8):
        for a in range(3):
            if (stc.proj(0, 1).table[b] >> a) & 1:
                overlap.setdefault((0, 1), []).append((rcc8.atoms[b], pa.atoms[a]))
                overlap.setdefault((1, 0), []).append((pa.atoms[a], rcc8.atoms[b]))
    li = loose_integration([rcc8, pa], overlap, name="STC")
    assert li.proj(0, 1) == stc.proj(0, 1) and li.proj(1, 0) == stc.proj(1, 0)
    full = {(0, 1): [(x, y) for x in rcc8.atoms for y in pa.atoms],
            (1, 0): [(y, x) for x in rcc8.atoms for y in pa.atoms]}
    li = loose_integration([rcc8, pa], full)
    assert li.proj(0, 1).is_constant_full and li.proj(1, 0).is_constant_full
    cut = {k: [p for p in v if set(p) != {"TPP", ">"} and set(p) != {"TPPI", "<"}] for k, v in overlap.items()}
    li = loose_integration([rcc8, pa], cut)
    assert not (li.proj(0, 1).table[rcc8.atom_index("TPP")] >> pa.atom_index(">")) & 1


def test_loose_integration_needs_symmetry(rcc8, pa):
    with pytest.raises(ValueError):
        loose_integration([rcc8, pa], {(0, 1): [("DC", "<")], (1, 0): []})


def test_products(cat):
    sizes = {"RCC8s_x_PAs": 390, "H8_x_PA": 1184, "Q8_x_PA": 1280, "C8_x_PA": 1264}
    for name, size in sizes.items():
        assert cat.subclass(name).size == size


def test_weakening_lookup(cat):
    w = cat.weakening("stc-weak-pa2rcc")
    assert w.replaced == ((1, 0),)
    assert w.tree.edges == frozenset({(0, 1)})
    assert cat.weakening("const:PA>RCC8@STC").weak == w.weak.__class__(
        w.weak.name.replace("stc-weak-pa2rcc", "const:PA>RCC8@STC"), w.weak.components, w.weak.projections
    )
    with pytest.raises(CatalogError):
        cat.weakening("nonsense")


def test_unknown_names(cat):
    for getter in (cat.algebra, cat.multialgebra, cat.subclass, cat.refinement):
        with pytest.raises(CatalogError):
            getter("NoSuchThing")


def test_malformed_data_reports_file(tmp_path):
    root = tmp_path / "data"
    shutil.copytree(data_dir(), root)
    (root / "multialgebras" / "stc.ma").write_text("multialgebra STC\ncomponents RCC8 PA\nprojection 1 2: XX -> *\n")
    with pytest.raises(AlgebraFormatError) as err:
        Catalog(root)
    assert "stc.ma:3" in str(err.value)
