"""Reproduction suite for the worked examples, lemmas and corollaries."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

from . import analysis as an
from .catalog import Catalog, load_catalog
from .files import read_network
from .multialg import projection_closure
from .oracle import brute_force_sat, minimal_network_classical
from .qcn import (
    Refused,
    algebraic_closure,
    enumerate_closed_scenarios,
    is_algebraically_consistent,
    refines,
    satisfiable,
    slice,
)
from .relalg import check_axioms


@dataclass
class SuiteItem:
    name: str
    passed: bool
    detail: str
    seconds: float

    def format(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.seconds:.2f}s): {self.detail}"


def _axioms(c: Catalog, name: str):
    rep = check_axioms(c.algebra(name))
    return rep.ok, "all axioms hold" if rep.ok else "; ".join(r.axiom for r in rep.failures())


def _ec_ntpp(c: Catalog):
    a = c.algebra("RCC8")
    got = a.format_bits(a.comp_bits(a.parse_bits("{EC}"), a.parse_bits("{NTPP}")))
    return got == "{PO,TPP,NTPP}", f"EC ⋄ NTPP = {got}"


def _proj_closure(c: Catalog):
    stc = c.multialgebra("STC")
    out = []
    ok = True
    for text, want in (("{TPP} ; {<,=}", "{TPP} ; {<}"), ("{TPP} ; {>}", "{} ; {}")):
        got = str(projection_closure(stc, stc.parse(text)))
        ok &= got == want
        out.append(f"{text} -> {got}")
    tpc = c.multialgebra("TPC3")
    got = str(projection_closure(tpc, tpc.parse("{<} ; {<,>} ; {>}")))
    ok &= got == "{} ; {} ; {}"
    out.append(f"TPC3 {{<}} ; {{<,>}} ; {{>}} -> {got}")
    return ok, "; ".join(out)


def _single_edge(c: Catalog):
    from .qcn import Network

    N = Network(c.multialgebra("STC"), ["x", "y"])
    N.set("x", "y", c.multialgebra("STC").parse("{TPP} ; {<,=}"))
    scen = [S.format(skip_universal=True).splitlines()[-1] for S in enumerate_closed_scenarios(N)]
    return scen == ["x y : {TPP} ; {<}"], f"closed scenarios: {scen}"


def _fig4(c: Catalog):
    N = read_network("fig4", c)
    closed = algebraic_closure(N)
    M = minimal_network_classical(N)
    want = read_network("fig4_minimal", c)
    ok = closed == N and refines(M, closed) and M != closed and M == want
    return ok, f"closure unchanged: {closed == N}; minimal network v1 v2 = {c.algebra('PA').format_bits(M.get(0, 1)[0])}"


def _fig6(c: Catalog):
    N = read_network("tpc3", c)
    mid = slice(N, 1)
    eq_bits = (c.algebra("PA").parse_bits("{=}"),)
    eq = mid.get("x", "y") == eq_bits and mid.get("y", "z") == eq_bits
    try:
        satisfiable(N, "backtrack")
        refused = False
    except Refused:
        refused = True
    neq = read_network("tpc3_neq", c)
    unsat = not satisfiable(neq, "backtrack").satisfiable and not satisfiable(neq, "bruteforce").satisfiable
    ok = eq and refused and unsat
    return ok, f"middle slice x = y = z: {eq}; SAT refused without completeness: {refused}; (<,≠,>) UNSAT: {unsat}"


def _fig7(c: Catalog):
    a = read_network("fig7a", c)
    b = read_network("fig7a_dc", c)
    ra, rb = brute_force_sat(a), brute_force_sat(b)
    cons = is_algebraically_consistent(a) and is_algebraically_consistent(b)
    ok = cons and not ra.satisfiable and rb.satisfiable and refines(rb.witness, b)
    return ok, f"both algebraically consistent: {cons}; fig7a {ra.label}; with DC {rb.label}"


def _report(rep: an.PropertyReport, expect: bool = True):
    ok = rep.holds == expect and (expect or rep.witness is not None)
    text = rep.witness_text.splitlines()[0] if rep.witness_text else rep.detail
    return ok, f"{'holds' if rep.holds else 'fails'} ({rep.subject}) {text}".rstrip()


def _certify_slicing(c: Catalog, jobs: int):
    cert = an.certify_slicing(c.subclass("RCC8s_x_PAs"), c.weakening("stc-weak-pa2rcc"), c, jobs=jobs)
    return True, cert.summary()


def _certify_refinement(c: Catalog, name: str, jobs: int):
    target = an.certify_slicing(
        c.subclass("RCC8s_x_PAs"), c.weakening("stc-weak-pa2rcc"), c, verify_dissociability=False
    )
    S = c.subclass(name)
    cert = an.certify_refinement(S, target, c.multi_refinement(S), catalog=c)
    return True, cert.summary()


def _refuse_h8(c: Catalog, jobs: int):
    try:
        an.certify_slicing(c.subclass("H8_x_PA"), catalog=c, force=True, jobs=jobs)
    except an.CertificationRefused as e:
        d = next((f for f in e.failed if f.property == "dissociable"), None)
        ok = d is not None and d.witness is not None and an.replay_dissociability_witness(d.witness)
        return ok, "refused: " + ", ".join(f.property for f in e.failed)
    return False, "certificate issued"


def suite_items(jobs: int = 1) -> list[tuple[str, Callable[[Catalog], tuple[bool, str]]]]:
    stc = lambda c: c.multialgebra("STC")  # noqa: E731
    return [
        ("axioms-PA", lambda c: _axioms(c, "PA")),
        ("axioms-RCC8", lambda c: _axioms(c, "RCC8")),
        ("composition-EC-NTPP", _ec_ntpp),
        ("projection-closure-examples", _proj_closure),
        ("stc-single-edge-scenario", _single_edge),
        ("fig4-minimal", _fig4),
        ("fig6-slices", _fig6),
        ("fig7-consistent-unsat", _fig7),
        *[
            (f"conv-closed-{n}", lambda c, n=n: _report(an.check_conv_closed(c.subclass(n))))
            for n in ("RCC8s_x_PAs", "H8_x_PA", "Q8_x_PA", "C8_x_PA")
        ],
        ("superdistributive-rcc8-pa-compose",
         lambda c: _report(an.check_superdistributive(stc(c).proj(0, 1), None, "compose"))),
        ("superdistributive-rcc8-pa-intersect",
         lambda c: _report(an.check_superdistributive(
             stc(c).proj(0, 1), c.subclass("RCC8_s").slices[0], "intersect"))),
        ("superdistributive-pa-rcc8-compose-fails",
         lambda c: _report(an.check_superdistributive(
             stc(c).proj(1, 0), [1 << i for i in range(3)], "compose"), expect=False)),
        *[
            (f"projection-stable-{n}",
             lambda c, n=n: _report(an.check_projection_stable(c.subclass(n), c.multi_refinement(c.subclass(n)))))
            for n in ("H8_x_PA", "Q8_x_PA", "C8_x_PA")
        ],
        ("conv-invariant-Q8_x_PA",
         lambda c: _report(an.check_conv_invariant(
             c.subclass("Q8_x_PA"), c.multi_refinement(c.subclass("Q8_x_PA"), ["h_Q8", "id_PA"])))),
        ("slicing-RCC8s_x_PAs", lambda c: _certify_slicing(c, jobs)),
        *[
            (f"refinement-{n}", lambda c, n=n: _certify_refinement(c, n, jobs))
            for n in ("H8_x_PA", "Q8_x_PA", "C8_x_PA")
        ],
        ("slicing-refused-H8_x_PA", lambda c: _refuse_h8(c, jobs)),
    ]


def run_paper_suite(catalog: Catalog | None = None, jobs: int = 1, out=None) -> list[SuiteItem]:
    """Run every item; an exception inside an item counts as a failure."""
    results = []
    try:
        catalog = catalog or load_catalog()
    except Exception as e:  # a broken catalog fails the whole suite
        item = SuiteItem("load-catalog", False, f"{type(e).__name__}: {e}", 0.0)
        if out:
            print(item.format(), file=out)
        return [item]
    for name, fn in suite_items(jobs):
        t0 = time.perf_counter()
        try:
            ok, detail = fn(catalog)
        except an.CertificationRefused as e:
            ok, detail = False, "refused: " + ", ".join(f.property for f in e.failed)
        except Exception as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        item = SuiteItem(name, bool(ok), detail, time.perf_counter() - t0)
        results.append(item)
        if out:
            print(item.format(), file=out, flush=True)
    return results
