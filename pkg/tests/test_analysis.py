import pytest

from qcr import analysis as an
from qcr.catalog import Refinement, SubclassDef
from qcr.multialg import MultiAlgebra
from qcr.qcn import Network, algebraic_closure, is_trivially_inconsistent


def _pa_s(cat):
    return cat.subclass("PA_s").slices[0]


def test_conv_closed_products(cat):
    for name in ("RCC8s_x_PAs", "H8_x_PA", "Q8_x_PA", "C8_x_PA"):
        assert an.check_conv_closed(cat.subclass(name)).holds


def test_conv_closed_witness(cat, stc, rcc8, pa):
    S = SubclassDef("tpp_eq", stc, slices=(frozenset({rcc8.bits_of(["TPP", "EQ"])}), _pa_s(cat)))
    rep = an.check_conv_closed(S)
    assert not rep.holds
    i, j, r = rep.witness
    assert (i, j) == (0, 1) and stc.proj(0, 1).apply_bits(r) == pa.bits_of(["<", "="])


def test_conv_closed_explicit(cat, stc, rcc8, pa):
    R = (rcc8.bits_of(["TPP"]), pa.bits_of(["<", "="]))
    rep = an.check_conv_closed(SubclassDef("x", stc, relations=frozenset({R})))
    assert not rep.holds and rep.witness == R
    R = (rcc8.bits_of(["TPP"]), pa.bits_of(["<"]))
    assert an.check_conv_closed(SubclassDef("x", stc, relations=frozenset({R}))).holds


def test_superdistributivity(cat, stc):
    assert an.check_superdistributive(stc.proj(0, 1), None, "compose").holds
    rcc8_s = cat.subclass("RCC8_s").slices[0]
    assert an.check_superdistributive(stc.proj(0, 1), rcc8_s, "intersect").holds
    rep = an.check_superdistributive(stc.proj(1, 0), [1, 2, 4], "compose")
    assert not rep.holds
    r, s = rep.witness
    p = stc.proj(1, 0)
    pa, rcc8 = stc.components[1], stc.components[0]
    assert rcc8.comp_bits(p.apply_bits(r), p.apply_bits(s)) & ~p.apply_bits(pa.comp_bits(r, s))


def test_uniform_shortcut_agrees_with_enumeration(stc):
    for p in (stc.proj(0, 1), stc.proj(1, 0)):
        a = an.check_superdistributive(p, None, "compose", "enumerate")
        b = an.check_superdistributive(p, None, "compose", "uniform-shortcut")
        assert a.holds == b.holds
    rep = an.check_superdistributive(stc.proj(0, 1), None, "intersect", "uniform-shortcut")
    assert rep.method == "refused"


def test_conv_distributive_weakened(cat):
    S = cat.subclass("RCC8s_x_PAs")
    assert not an.check_conv_distributive(S).holds
    assert an.check_conv_distributive(S, cat.weakening("stc-weak-pa2rcc").weak).holds


def test_dissociable(cat):
    S = cat.subclass("RCC8s_x_PAs")
    weak = cat.weakening("stc-weak-pa2rcc").weak
    assert an.check_dissociable(S, weak).holds


def test_dissociable_h8_fails_with_replayable_witness(cat):
    S = cat.subclass("H8_x_PA")
    guarded = an.check_dissociable(S)
    assert not guarded.holds and guarded.method == "refused"
    rep = an.check_dissociable(S, force=True)
    assert not rep.holds and rep.method == "verified"
    W = rep.witness
    assert an.replay_dissociability_witness(W)
    # the full algebraic closure of the witness is still well defined
    algebraic_closure(W)


def test_dissociable_precondition(cat, stc, rcc8):
    S = SubclassDef("tpp_eq", stc, slices=(frozenset({rcc8.bits_of(["TPP", "EQ"])}), _pa_s(cat)))
    rep = an.check_dissociable(S)
    assert rep.method == "refused" and "conv-closed" in rep.detail


def test_composition_stable(cat, pa):
    assert an.check_composition_stable(cat.subclass("PA"), cat.refinement("h_max")).holds
    assert an.check_composition_stable(cat.subclass("H8"), cat.refinement("h_H8")).holds
    mapping = {r: r for r in range(8)}
    mapping[pa.bits_of(["<", "="])] = pa.bits_of(["="])
    bad = Refinement("force_eq", pa, mapping)
    rep = an.check_composition_stable(cat.subclass("PA"), bad)
    assert not rep.holds and rep.witness is not None


def test_composition_stable_refuses_partial(cat, pa):
    partial = Refinement("partial", pa, {pa.bits_of(["<"]): pa.bits_of(["<"])})
    assert an.check_composition_stable(cat.subclass("PA"), partial).method == "refused"


@pytest.mark.parametrize("name", ["H8_x_PA", "Q8_x_PA", "C8_x_PA"])
def test_projection_stable(cat, name):
    S = cat.subclass(name)
    assert an.check_projection_stable(S, cat.multi_refinement(S)).holds


def test_conv_invariance(cat):
    S = cat.subclass("Q8_x_PA")
    assert an.check_conv_invariant(S, cat.multi_refinement(S, ["h_Q8", "id_PA"])).holds
    ident = cat.multi_refinement(S, ["id_RCC8", "id_PA"])
    for name in ("RCC8s_x_PAs", "H8_x_PA", "C8_x_PA"):
        assert an.check_conv_invariant(cat.subclass(name), ident).holds
    h8 = cat.subclass("H8_x_PA")
    rep = an.check_conv_invariant(h8, cat.multi_refinement(h8))
    # recorded outcome: h_H8 changes the projection of {TPP,EQ}
    assert not rep.holds and rep.witness is not None


def test_invariance_implies_projection_stability(cat):
    S = cat.subclass("Q8_x_PA")
    H = cat.multi_refinement(S, ["h_Q8", "id_PA"])
    assert an.check_conv_invariant(S, H).holds
    assert an.check_projection_stable(S, H).holds


def test_plenary_and_declared(cat):
    assert an.check_plenary_tree(cat.multialgebra("STC")).holds
    assert an.check_declared_minimal(cat.subclass("RCC8s_x_PAs")).holds
    assert not an.check_declared_minimal(cat.subclass("H8_x_PA")).holds
    assert an.check_declared_complete(cat.multialgebra("STC"), cat).holds
    assert not an.check_declared_complete(cat.multialgebra("TPC3"), cat).holds


def test_certify_slicing(certificates):
    cert = certificates["RCC8s_x_PAs"]
    assert cert.theorem == "weakened-slicing"
    assert all(c.holds for c in cert.conditions)
    assert cert.conclusion == "algebraically tractable"


def test_certify_slicing_refuses_h8(cat):
    with pytest.raises(an.CertificationRefused) as err:
        an.certify_slicing(cat.subclass("H8_x_PA"), catalog=cat, force=True)
    failed = {c.property for c in err.value.failed}
    assert "dissociable" in failed and err.value.kind == "failed"


def test_certify_slicing_needs_declared_minimality(cat, stc):
    S = cat.subclass("RCC8s_x_PAs")
    bare = SubclassDef("bare", stc, slices=S.slices)
    with pytest.raises(an.CertificationRefused) as err:
        an.certify_slicing(bare, cat.weakening("stc-weak-pa2rcc"), cat)
    assert [c.property for c in err.value.failed] == ["declared-minimal"]
    assert err.value.kind == "refused"


@pytest.mark.parametrize("name", ["H8_x_PA", "Q8_x_PA", "C8_x_PA"])
def test_certify_refinement(certificates, name):
    cert = certificates[name]
    assert cert.theorem == "refinement" and cert.target is certificates["RCC8s_x_PAs"]


def test_certify_refinement_without_target(cat):
    S = cat.subclass("H8_x_PA")
    with pytest.raises(an.CertificationRefused) as err:
        an.certify_refinement(S, None, cat.multi_refinement(S), catalog=cat)
    assert "target-tractable" in {c.property for c in err.value.failed}


def test_certificate_covers(cat, certificates, stc):
    cert = certificates["RCC8s_x_PAs"]
    N = Network(stc, ["x", "y"])
    N.set("x", "y", stc.parse("{TPP} ; {<}"))
    assert cert.covers(N)
    N.set("x", "y", stc.parse("{TPP,EQ} ; {<}"))
    assert not cert.covers(N)


def test_property_dispatch(cat):
    S = cat.subclass("Q8_x_PA")
    for prop in an.PROPERTIES:
        reports = an.check_property(S, prop, cat)
        assert reports and all(r.property == prop for r in reports)
    with pytest.raises(ValueError):
        an.check_property(S, "nonsense", cat)


def test_failing_reports_have_witnesses(cat):
    S = cat.subclass("H8_x_PA")
    for prop in ("conv-invariant", "dissociable", "conv-distributive"):
        for rep in an.check_property(S, prop, cat, force=True):
            if not rep.holds and rep.method == "verified":
                assert rep.witness is not None and rep.witness_text
