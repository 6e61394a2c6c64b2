"""Enumeration checks for the hypotheses of the tractability theorems.

Every check returns a :class:`PropertyReport`.  A failing report always
carries a witness that can be replayed with the plain ``multialg`` and
``qcn`` operations.  ``certify_slicing`` and ``certify_refinement``
gather the reports needed by the slicing and refinement theorems (raw or
weakened) and either return a :class:`TractabilityCertificate` or raise
:class:`CertificationRefused` listing every condition.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from . import kernels
from .catalog import (
    Catalog,
    MultiRefinement,
    Refinement,
    SubclassDef,
    Weakening,
    closure_defects,
    load_catalog,
)
from .multialg import (
    AntiTree,
    MultiAlgebra,
    Projection,
    is_tree_weakening,
    is_weakening,
    plenary_antitrees,
    verify_plenary_antitree,
)
from .qcn import (
    Network,
    composition_closure,
    is_algebraically_consistent,
    is_trivially_inconsistent,
    projection_closure_network,
)
from .relalg import Algebra, is_uniform

DISSOCIABILITY_GUARD = 1024

PROPERTIES = (
    "subclass-closure",
    "basic-subset",
    "circ-cap-closed",
    "atomizable",
    "conv-closed",
    "conv-distributive",
    "uniform",
    "dissociable",
    "composition-stable",
    "projection-stable",
    "conv-invariant",
    "plenary-tree",
    "declared-minimal",
    "declared-complete",
)

# structural conditions used by the certificates on top of PROPERTIES
EXTRA_CONDITIONS = (
    "product-form",
    "tree-weakening",
    "weakening",
    "refinement-valid",
    "maps-into-target",
    "target-tractable",
    "closed-consistent-satisfiable",
    "algebraically-stable",
)


@dataclass
class PropertyReport:
    property: str
    subject: str
    holds: bool
    method: str = "verified"
    witness: object = None
    witness_text: str = ""
    cost: int = 0
    nominal: int | None = None
    detail: str = ""
    citation: str | None = None

    def format(self) -> str:
        status = "holds" if self.holds else ("refused" if self.method == "refused" else "FAILS")
        line = f"{self.property:<30} {status:<8} [{self.method}] {self.subject}"
        extra = []
        if self.cost:
            extra.append(f"cost={self.cost}")
        if self.nominal is not None:
            extra.append(f"nominal={self.nominal}")
        if extra:
            line += " (" + ", ".join(extra) + ")"
        out = [line]
        if self.detail:
            out.append(f"    {self.detail}")
        if self.citation:
            out.append(f"    citation: {self.citation}")
        if self.witness_text:
            out.extend("    " + w for w in self.witness_text.splitlines())
        return "\n".join(out)


class CertificationRefused(Exception):
    def __init__(self, subject: str, theorem: str, conditions: list[PropertyReport]):
        self.subject = subject
        self.theorem = theorem
        self.conditions = conditions
        self.failed = [c for c in conditions if not c.holds]
        names = ", ".join(c.property for c in self.failed)
        super().__init__(f"{theorem} theorem does not apply to {subject}: {names}")

    @property
    def kind(self) -> str:
        """``failed`` when a checked condition is false, ``refused`` otherwise."""
        if any(c.method in ("verified", "derived") for c in self.failed):
            return "failed"
        return "refused"

    def format(self) -> str:
        lines = [f"NO CERTIFICATE: {self.theorem} theorem for {self.subject}"]
        lines += [c.format() for c in self.conditions]
        lines.append("failed conditions: " + ", ".join(c.property for c in self.failed))
        return "\n".join(lines) + "\n"


@dataclass
class TractabilityCertificate:
    subclass: SubclassDef
    theorem: str
    conditions: list[PropertyReport]
    weakening: Weakening | None = None
    refinement: MultiRefinement | None = None
    target: "TractabilityCertificate | None" = None
    conclusion: str = "algebraically tractable"

    def valid_for(self, ma: MultiAlgebra) -> bool:
        if ma == self.subclass.ma:
            return True
        return self.weakening is not None and ma == self.weakening.weak

    def covers(self, network: Network) -> bool:
        if not self.valid_for(network.ma):
            return False
        S = self.subclass
        for i, j, bits in network.edges():
            if not S.contains_bits(bits):
                return False
            if not S.contains_bits(network.get(j, i)):
                return False
        return True

    def summary(self) -> str:
        via = f" under {self.weakening.name}" if self.weakening else ""
        if self.refinement is not None:
            via += f" via {self.refinement.name} onto {self.target.subclass.name}"
        return f"{self.subclass.name} is {self.conclusion} ({self.theorem} theorem{via})"

    def format(self) -> str:
        lines = [f"CERTIFICATE: {self.summary()}"]
        lines.append(f"multi-algebra: {self.subclass.ma.name}")
        if self.weakening:
            lines.append(f"weakening: {self.weakening.describe()}")
        lines += [c.format() for c in self.conditions]
        lines.append(f"conclusion: {self.conclusion}")
        return "\n".join(lines) + "\n"


# helpers -----------------------------------------------------------------------


def _ma_for(S: SubclassDef, ma: MultiAlgebra | None) -> MultiAlgebra:
    if ma is None:
        return S.ma
    if ma.components != S.ma.components:
        raise ValueError(f"{ma.name} does not have the components of {S.ma.name}")
    return ma


def _slices(S: SubclassDef) -> list[list[int]]:
    return [sorted(S.slice_set(i)) for i in range(S.ma.m)]


def _fmt(a: Algebra, bits: int) -> str:
    return a.format_bits(bits)


def _declared(S: SubclassDef, i: int, key: str) -> str | None:
    if S.ma.m == 1:
        return S.facts.get(key)
    return S.facts.get(f"slice{i + 1}:{key}")


def _triangle(ma: MultiAlgebra, xy, yz, xz) -> Network:
    N = Network(ma, ["x", "y", "z"])
    N.set("x", "y", tuple(xy))
    N.set("y", "z", tuple(yz))
    N.set("x", "z", tuple(xz))
    return N


# closure properties -----------------------------------------------------------


def check_subclass_closure(S: SubclassDef) -> PropertyReport:
    """Closure under composition, intersection and converse."""
    cost = 0
    if S.is_product:
        for i, rels in enumerate(_slices(S)):
            a = S.ma.components[i]
            cost += len(rels) ** 2
            defects = closure_defects(a, rels)
            if defects:
                return PropertyReport(
                    "subclass-closure", S.name, False, cost=cost,
                    witness=(i, defects[0]), witness_text=f"slice {i + 1}: {defects[0]}",
                )
        return PropertyReport("subclass-closure", S.name, True, cost=cost,
                              detail="every slice is closed under composition, intersection and converse")
    ma = S.ma
    members = list(S.members())
    for R in members:
        conv = tuple(a.conv_bits(b) for a, b in zip(ma.components, R))
        if not S.contains_bits(conv):
            return PropertyReport("subclass-closure", S.name, False, cost=cost,
                                  witness=R, witness_text=f"converse of {ma.format_bits(R)} missing")
        for R2 in members:
            cost += 1
            comp = tuple(a.comp_bits(x, y) for a, x, y in zip(ma.components, R, R2))
            inter = tuple(x & y for x, y in zip(R, R2))
            for name, val in (("composition", comp), ("intersection", inter)):
                if not S.contains_bits(val):
                    return PropertyReport(
                        "subclass-closure", S.name, False, cost=cost, witness=(R, R2),
                        witness_text=f"{name} of {ma.format_bits(R)} and {ma.format_bits(R2)} missing",
                    )
    return PropertyReport("subclass-closure", S.name, True, cost=cost)


def check_basic_subset(S: SubclassDef) -> PropertyReport:
    ma = S.ma
    if S.is_product:
        for i, rels in enumerate(S.slices):
            a = ma.components[i]
            for b in range(a.n):
                if 1 << b not in rels:
                    return PropertyReport("basic-subset", S.name, False, witness=(i, 1 << b),
                                          witness_text=f"slice {i + 1} lacks {a.atoms[b]}")
        return PropertyReport("basic-subset", S.name, True, detail="every slice contains every atom")
    for B in ma.basics_bits(ma.full):
        if not S.contains_bits(B):
            return PropertyReport("basic-subset", S.name, False, witness=B,
                                  witness_text=f"{ma.format_bits(B)} missing")
    return PropertyReport("basic-subset", S.name, True)


def check_circ_cap_closed(S: SubclassDef, subclass_report: PropertyReport | None = None) -> PropertyReport:
    """``(R ⋄ R') ∩ R'' ∈ S`` for all members."""
    if subclass_report is None:
        subclass_report = check_subclass_closure(S)
    if subclass_report.holds:
        return PropertyReport("circ-cap-closed", S.name, True, method="derived",
                              detail="a subclass is closed under composition followed by intersection")
    if not S.is_product:
        members = list(S.members())
        cost = 0
        ma = S.ma
        for R in members:
            for R2 in members:
                comp = tuple(a.comp_bits(x, y) for a, x, y in zip(ma.components, R, R2))
                for R3 in members:
                    cost += 1
                    val = tuple(x & y for x, y in zip(comp, R3))
                    if not S.contains_bits(val):
                        return PropertyReport("circ-cap-closed", S.name, False, cost=cost,
                                              witness=(R, R2, R3),
                                              witness_text=f"({ma.format_bits(R)} ⋄ {ma.format_bits(R2)}) ∩ {ma.format_bits(R3)} missing")
        return PropertyReport("circ-cap-closed", S.name, True, cost=cost)
    cost = 0
    for i, rels in enumerate(_slices(S)):
        a = S.ma.components[i]
        s = set(rels)
        for r in rels:
            for t in rels:
                c = a.comp_bits(r, t)
                for u in rels:
                    cost += 1
                    if c & u not in s:
                        return PropertyReport(
                            "circ-cap-closed", S.name, False, cost=cost, witness=(i, r, t, u),
                            witness_text=f"slice {i + 1}: ({_fmt(a, r)} ⋄ {_fmt(a, t)}) ∩ {_fmt(a, u)} = {_fmt(a, c & u)} missing",
                        )
    return PropertyReport("circ-cap-closed", S.name, True, cost=cost)


def check_atomizable(S: SubclassDef, basic: PropertyReport, complete: PropertyReport) -> PropertyReport:
    """Only the basic-subset route under a completeness assumption is supported."""
    if basic.holds and complete.holds:
        return PropertyReport(
            "atomizable", S.name, True, method="derived",
            detail="basic subset; a satisfiable relation contains a satisfiable basic relation, which is in S",
        )
    return PropertyReport(
        "atomizable", S.name, False, method="refused",
        detail="atomizability is only established for basic subsets under a completeness assumption",
    )


def check_conv_closed(S: SubclassDef, ma: MultiAlgebra | None = None) -> PropertyReport:
    ma = _ma_for(S, ma)
    subject = f"{S.name} over {ma.name}"
    cost = 0
    if S.is_product:
        for (i, j), p in sorted(ma.projections.items()):
            for r in sorted(S.slices[i]):
                cost += 1
                img = p.apply_bits(r)
                if img not in S.slices[j]:
                    a, b = ma.components[i], ma.components[j]
                    return PropertyReport(
                        "conv-closed", subject, False, cost=cost, witness=(i, j, r),
                        witness_text=f"projection {a.name}->{b.name} of {_fmt(a, r)} is {_fmt(b, img)}, not in slice {j + 1}",
                    )
        return PropertyReport("conv-closed", subject, True, cost=cost,
                              detail="every projection maps each slice into the target slice")
    for R in S.members():
        cost += 1
        C = ma.close_bits(R)
        if not S.contains_bits(C):
            return PropertyReport("conv-closed", subject, False, cost=cost, witness=R,
                                  witness_text=f"projection closure of {ma.format_bits(R)} is {ma.format_bits(C)}")
    return PropertyReport("conv-closed", subject, True, cost=cost)


# distributivity ----------------------------------------------------------------


def check_superdistributive(
    p: Projection, rels: Iterable[int] | None = None, op: str = "compose", method: str = "enumerate"
) -> PropertyReport:
    """Superdistributivity of one projection over ``compose`` or ``intersect``.

    ``method="uniform-shortcut"`` checks composition on atoms only and
    concludes for every relation when the source algebra is uniform.
    """
    a, b = p.source, p.target
    subject = f"{a.name}->{b.name} over {op}"
    if method == "uniform-shortcut":
        if op != "compose":
            return PropertyReport("conv-distributive", subject, False, method="refused",
                                  detail="the atom shortcut only applies to composition")
        if not is_uniform(a):
            return PropertyReport("conv-distributive", subject, False, method="refused",
                                  detail=f"{a.name} is not uniform")
        rels = [1 << i for i in range(a.n)]
    elif method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    rels = list(range(1 << a.n)) if rels is None else sorted(rels)
    cost = 0
    for r in rels:
        pr = p.apply_bits(r)
        for s in rels:
            cost += 1
            if op == "compose":
                base = a.comp_bits(r, s)
                if not base:
                    continue
                lhs = b.comp_bits(pr, p.apply_bits(s))
            elif op == "intersect":
                base = r & s
                if not base:
                    continue
                lhs = pr & p.apply_bits(s)
            else:
                raise ValueError(f"unknown operator {op!r}")
            rhs = p.apply_bits(base)
            if lhs & ~rhs:
                sym = "⋄" if op == "compose" else "∩"
                return PropertyReport(
                    "conv-distributive", subject, False, method="verified", cost=cost,
                    witness=(r, s),
                    witness_text=(
                        f"r={_fmt(a, r)}, r'={_fmt(a, s)}: proj(r) {sym} proj(r') = {_fmt(b, lhs)} "
                        f"not within proj(r {sym} r') = {_fmt(b, rhs)}"
                    ),
                )
    detail = "checked on atoms; uniform source algebra" if method == "uniform-shortcut" else ""
    return PropertyReport("conv-distributive", subject, True, cost=cost, detail=detail)


def check_conv_distributive(S: SubclassDef, ma: MultiAlgebra | None = None, method: str = "enumerate") -> PropertyReport:
    ma = _ma_for(S, ma)
    subject = f"{S.name} over {ma.name}"
    cost = 0
    parts = []
    for (i, j), p in sorted(ma.projections.items()):
        rels = S.slice_set(i)
        for op in ("compose", "intersect"):
            use = method if op == "compose" else "enumerate"
            rep = check_superdistributive(p, rels, op, use)
            if use == "uniform-shortcut" and not rep.holds and rep.method == "refused":
                rep = check_superdistributive(p, rels, op, "enumerate")
            cost += rep.cost
            parts.append(f"{i + 1}->{j + 1} {op}: {'ok' if rep.holds else 'fails'}")
            if not rep.holds:
                return PropertyReport(
                    "conv-distributive", subject, False, cost=cost, witness=(i, j, op, rep.witness),
                    witness_text=f"projection {i + 1}->{j + 1}: {rep.witness_text}",
                )
    return PropertyReport("conv-distributive", subject, True, cost=cost, detail="; ".join(parts))


def check_uniform(a: Algebra) -> PropertyReport:
    for x in range(a.n):
        for y in range(a.n):
            if not a.atom_comp[x][y]:
                return PropertyReport("uniform", a.name, False, witness=(x, y),
                                      witness_text=f"{a.atoms[x]} ⋄ {a.atoms[y]} is empty", cost=a.n * a.n)
    return PropertyReport("uniform", a.name, True, cost=a.n * a.n)


# dissociability ----------------------------------------------------------------


def _bislice_elements(ma: MultiAlgebra, i: int, j: int, si: Sequence[int], sj: Sequence[int]) -> list[tuple[int, int]]:
    bi = ma.bi_slice(i, j)
    out = set()
    for r in si:
        for s in sj:
            c = bi.close_bits((r, s))
            if c[0] and c[1]:
                out.add(c)
    return sorted(out)


def _dissoc_chunk(args):
    backend, lo, hi, rest = args
    return kernels.get(backend).dissociability_scan(*rest[:10], lo, hi, rest[10])


def check_dissociable(
    S: SubclassDef,
    ma: MultiAlgebra | None = None,
    force: bool = False,
    jobs: int = 1,
    stop_first: bool = True,
    backend: str | None = None,
    preconditions: bool = True,
) -> PropertyReport:
    """Three-variable networks over every bi-slice: projection, then composition.

    After closing each edge under projection and each slice under
    composition, a network without empty relations must be closed under
    projection.  Bi-slices larger than ``DISSOCIABILITY_GUARD`` relations are
    refused unless ``force`` is set.
    """
    ma = _ma_for(S, ma)
    subject = f"{S.name} over {ma.name}"
    if preconditions:
        cc = check_conv_closed(S, ma)
        ic = check_circ_cap_closed(S)
        bad = [r.property for r in (cc, ic) if not r.holds]
        if bad:
            return PropertyReport("dissociable", subject, False, method="refused",
                                  detail="precondition not met: " + ", ".join(bad))
    if ma.m == 1:
        return PropertyReport("dissociable", subject, True, method="derived",
                              detail="a single algebra has no projection to violate")
    total_cost = 0
    nominal = 0
    details = []
    for i, j in combinations(range(ma.m), 2):
        si, sj = sorted(S.slice_set(i)), sorted(S.slice_set(j))
        size = len(si) * len(sj)
        nominal += size ** 3
        if size > DISSOCIABILITY_GUARD and not force:
            return PropertyReport(
                "dissociable", subject, False, method="refused", nominal=nominal,
                detail=f"bi-slice {i + 1},{j + 1} has {size} relations (> {DISSOCIABILITY_GUARD}); use force",
            )
        a, b = ma.components[i], ma.components[j]
        if a.lifted_composition is None or b.lifted_composition is None:
            return PropertyReport("dissociable", subject, False, method="refused",
                                  detail="algebras with more than 8 atoms are not supported")
        elems = _bislice_elements(ma, i, j, si, sj)
        k = len(elems)
        e0 = kernels.u64(x for x, _ in elems)
        e1 = kernels.u64(y for _, y in elems)
        rest = (
            e0, e1,
            kernels.u64(a.lifted_composition), kernels.u64(a.lifted_converse),
            kernels.u64(b.lifted_composition), kernels.u64(b.lifted_converse),
            kernels.u64(ma.proj(i, j).lifted), kernels.u64(ma.proj(j, i).lifted),
            a.n, b.n, stop_first,
        )
        if jobs > 1 and k > 1:
            step = max(1, -(-k // (jobs * 4)))
            chunks = [(backend, lo, min(lo + step, k), rest) for lo in range(0, k, step)]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_dissoc_chunk, chunks))
            checked = sum(r[0] for r in results)
            firsts = [r[1:] for r in results if r[1] >= 0]
            first = min(firsts) if firsts else (-1, -1, -1)
        else:
            res = _dissoc_chunk((backend, 0, k, rest))
            checked, first = res[0], res[1:]
        total_cost += checked
        details.append(f"bi-slice {i + 1},{j + 1}: {size} relations, {k} closed non-empty, {checked} networks")
        if first[0] >= 0:
            bi = ma if ma.m == 2 else ma.bi_slice(i, j)
            W = _triangle(bi, elems[first[0]], elems[first[1]], elems[first[2]])
            after = composition_closure(projection_closure_network(W))
            text = "network (projection-closed edges):\n" + W.format(skip_universal=False)
            text += "after composition closure:\n" + after.format(skip_universal=False)
            text += "which is neither trivially inconsistent nor closed under projection"
            return PropertyReport(
                "dissociable", subject, False, witness=W, witness_text=text,
                cost=total_cost, nominal=nominal, detail="; ".join(details),
            )
    return PropertyReport("dissociable", subject, True, cost=total_cost, nominal=nominal,
                          detail="; ".join(details))


def replay_dissociability_witness(W: Network) -> bool:
    """True when ``W`` really violates dissociability."""
    after = composition_closure(projection_closure_network(W))
    return not is_trivially_inconsistent(after) and not is_algebraically_consistent(after)


# stability ---------------------------------------------------------------------


def check_composition_stable(
    sub: SubclassDef | tuple[Algebra, Iterable[int]],
    h: Refinement,
    stop_first: bool = True,
    backend: str | None = None,
) -> PropertyReport:
    """Closed, non-empty triangles over the slice stay so after refinement."""
    if isinstance(sub, SubclassDef):
        if sub.ma.m != 1:
            raise ValueError("composition stability is checked on a single slice")
        a, rels, name = sub.ma.components[0], sorted(sub.slices[0]), sub.name
    else:
        a, rels = sub[0], sorted(sub[1])
        name = f"{a.name} relations"
    subject = f"{name} through {h.name}"
    if h.algebra != a:
        raise ValueError(f"{h.name} is not over {a.name}")
    missing = [r for r in rels if r not in h.mapping]
    if missing:
        return PropertyReport("composition-stable", subject, False, method="refused",
                              detail=f"{h.name} undefined on {_fmt(a, missing[0])}")
    if a.lifted_composition is None:
        return PropertyReport("composition-stable", subject, False, method="refused",
                              detail="algebras with more than 8 atoms are not supported")
    images = [h.mapping[r] for r in rels]
    closed, i, j, k = kernels.get(backend).composition_stability_scan(
        kernels.u64(rels), kernels.u64(images),
        kernels.u64(a.lifted_composition), kernels.u64(a.lifted_converse), a.n, stop_first,
    )
    nominal = len(rels) ** 3
    if i >= 0:
        ma = MultiAlgebra.mono(a)
        W = _triangle(ma, (rels[i],), (rels[j],), (rels[k],))
        text = (
            f"closed triangle xy={_fmt(a, rels[i])} yz={_fmt(a, rels[j])} xz={_fmt(a, rels[k])} "
            f"refines to xy={_fmt(a, images[i])} yz={_fmt(a, images[j])} xz={_fmt(a, images[k])}, "
            "which is not closed or has an empty edge"
        )
        return PropertyReport("composition-stable", subject, False, witness=W, witness_text=text,
                              cost=closed, nominal=nominal)
    return PropertyReport("composition-stable", subject, True, cost=closed, nominal=nominal,
                          detail=f"{closed} closed triangles checked")


def check_projection_stable(S: SubclassDef, H: MultiRefinement, ma: MultiAlgebra | None = None) -> PropertyReport:
    ma = _ma_for(S, ma)
    subject = f"{S.name} through {H.name} over {ma.name}"
    cost = 0
    consistent = 0
    for i, j in combinations(range(ma.m), 2):
        bi = ma.bi_slice(i, j)
        hi, hj = H.parts[i], H.parts[j]
        for r in sorted(S.slice_set(i)):
            for s in sorted(S.slice_set(j)):
                cost += 1
                if not (r and s) or not bi.is_closed_bits((r, s)):
                    continue
                consistent += 1
                img = (hi(r), hj(s))
                if not (img[0] and img[1]) or not bi.is_closed_bits(img):
                    a, b = ma.components[i], ma.components[j]
                    return PropertyReport(
                        "projection-stable", subject, False, cost=cost, witness=(i, j, r, s),
                        witness_text=(
                            f"({_fmt(a, r)}, {_fmt(b, s)}) is closed under projection, "
                            f"its refinement ({_fmt(a, img[0])}, {_fmt(b, img[1])}) is not"
                        ),
                    )
    return PropertyReport("projection-stable", subject, True, cost=cost,
                          detail=f"{consistent} consistent bi-relations checked")


def check_conv_invariant(S: SubclassDef, H: MultiRefinement, ma: MultiAlgebra | None = None) -> PropertyReport:
    ma = _ma_for(S, ma)
    subject = f"{S.name} through {H.name} over {ma.name}"
    cost = 0
    for (i, j), p in sorted(ma.projections.items()):
        h = H.parts[i]
        for r in sorted(S.slice_set(i)):
            cost += 1
            if p.apply_bits(r) != p.apply_bits(h(r)):
                a, b = ma.components[i], ma.components[j]
                return PropertyReport(
                    "conv-invariant", subject, False, cost=cost, witness=(i, j, r),
                    witness_text=(
                        f"projection {i + 1}->{j + 1}: {_fmt(a, r)} gives {_fmt(b, p.apply_bits(r))}, "
                        f"{h.name}({_fmt(a, r)}) = {_fmt(a, h(r))} gives {_fmt(b, p.apply_bits(h(r)))}"
                    ),
                )
    return PropertyReport("conv-invariant", subject, True, cost=cost)


# trees and declared facts ------------------------------------------------------


def check_plenary_tree(ma: MultiAlgebra, tree: AntiTree | None = None) -> PropertyReport:
    if tree is not None:
        rep = verify_plenary_antitree(ma, tree)
        if rep.plenary:
            return PropertyReport("plenary-tree", ma.name, True, cost=rep.checked, witness=tree,
                                  detail=f"anti-tree {tree.format()} is plenary")
        v = rep.violations[0]
        return PropertyReport(
            "plenary-tree", ma.name, False, cost=rep.checked, witness=v,
            witness_text=(
                f"anti-tree {tree.format()}: projection {v.source + 1}->{v.target + 1} of {v.atom} "
                f"is {v.direct}, the chain gives {v.chained}"
            ),
        )
    trees = plenary_antitrees(ma)
    if trees:
        return PropertyReport("plenary-tree", ma.name, True, witness=trees[0],
                              detail="plenary anti-trees: " + "; ".join(t.format() for t in trees))
    return PropertyReport("plenary-tree", ma.name, False, detail="no plenary anti-tree")


def check_declared_minimal(S: SubclassDef) -> PropertyReport:
    missing, cites = [], []
    for i in range(S.ma.m):
        cite = _declared(S, i, "minimal")
        name = S.slice_names[i] if S.slice_names else f"slice {i + 1}"
        if cite is None:
            missing.append(name)
        else:
            cites.append(f"{name}: {cite}")
    if missing:
        return PropertyReport("declared-minimal", S.name, False, method="declared",
                              detail="no declared minimality for " + ", ".join(missing))
    return PropertyReport("declared-minimal", S.name, True, method="declared", citation="; ".join(cites))


def check_declared_complete(ma: MultiAlgebra, catalog: Catalog | None = None) -> PropertyReport:
    catalog = catalog or load_catalog()
    c = catalog.completeness_for(ma)
    if c is None:
        return PropertyReport("declared-complete", ma.name, False, method="declared",
                              detail="no completeness assumption declared")
    return PropertyReport("declared-complete", ma.name, True, method="declared",
                          detail=c.statement, citation=c.citation)


def _derived(prop: str, subject: str, needs: Sequence[PropertyReport], detail: str) -> PropertyReport:
    ok = all(r.holds for r in needs)
    missing = [r.property for r in needs if not r.holds]
    if not ok:
        detail += " (unmet: " + ", ".join(missing) + ")"
    return PropertyReport(prop, subject, ok, method="derived", detail=detail)


# certificates ------------------------------------------------------------------


def certify_slicing(
    S: SubclassDef,
    weakening: Weakening | None = None,
    catalog: Catalog | None = None,
    force: bool = False,
    jobs: int = 1,
    tree: AntiTree | None = None,
    verify_dissociability: bool = True,
    distributivity_method: str = "enumerate",
    backend: str | None = None,
) -> TractabilityCertificate:
    """Slicing theorem (raw) or its weakened corollary when ``weakening`` is given."""
    catalog = catalog or load_catalog()
    conds: list[PropertyReport] = []
    complete = check_declared_complete(S.ma, catalog)
    if weakening is not None:
        if weakening.base != S.ma:
            raise ValueError(f"{weakening.name} weakens {weakening.base.name}, not {S.ma.name}")
        weak = weakening.weak
        theorem = "weakened-slicing"
        product = PropertyReport("product-form", S.name, S.is_product, detail="S is a product of slice sets")
        plenary = check_plenary_tree(S.ma, tree or weakening.tree)
        t = tree or weakening.tree
        tw_ok = plenary.holds and is_tree_weakening(S.ma, weak, t)
        treew = PropertyReport("tree-weakening", weakening.name, tw_ok,
                               detail=f"projections on the edges of {t.format()} are unchanged")
        closure = check_subclass_closure(S)
        basic = check_basic_subset(S)
        minimal = check_declared_minimal(S)
        distrib = check_conv_distributive(S, weak, distributivity_method) if S.is_product else \
            PropertyReport("conv-distributive", S.name, False, method="refused", detail="needs product form")
        convc = check_conv_closed(S, weak)
        conds += [product, complete, plenary, treew, closure, basic, minimal, distrib, convc]
        conds.append(_derived("circ-cap-closed", S.name, [closure], "subclass"))
        conds.append(_derived("atomizable", S.name, [basic, complete], "basic subset under completeness"))
        conds.append(_derived("dissociable", f"{S.name} over {weak.name}", [closure, distrib, convc],
                              "conv-closed conv-distributive subclass"))
        conds.append(_derived("closed-consistent-satisfiable", weak.name, [plenary, treew, complete],
                              "tree multi-algebra whose closed scenarios are satisfiable"))
        if verify_dissociability and all(c.holds for c in (closure, distrib, convc)):
            rep = check_dissociable(S, weak, force=force, jobs=jobs, backend=backend)
            rep.detail = "cross-check by enumeration; " + rep.detail
            conds.append(rep)
    else:
        theorem = "slicing"
        closure = check_subclass_closure(S)
        basic = check_basic_subset(S)
        cic = check_circ_cap_closed(S, closure)
        atom = check_atomizable(S, basic, complete)
        minimal = check_declared_minimal(S)
        convc = check_conv_closed(S)
        dissoc = check_dissociable(S, force=force, jobs=jobs, backend=backend, preconditions=False)
        if not (convc.holds and cic.holds) and dissoc.holds:
            dissoc = PropertyReport("dissociable", S.name, False, method="refused",
                                    detail="preconditions conv-closed and circ-cap-closed not met")
        plenary = check_plenary_tree(S.ma, tree)
        d3 = _derived("closed-consistent-satisfiable", S.ma.name, [plenary, complete],
                      "tree multi-algebra whose closed scenarios are satisfiable")
        conds += [complete, cic, basic, atom, minimal, dissoc, plenary, d3, convc]
    if all(c.holds for c in conds):
        return TractabilityCertificate(S, theorem, conds, weakening=weakening)
    raise CertificationRefused(S.name, theorem, conds)


def _refinement_valid(S: SubclassDef, H: MultiRefinement) -> PropertyReport:
    for i, h in enumerate(H.parts):
        for r in sorted(S.slice_set(i)):
            if r not in h.mapping:
                return PropertyReport("refinement-valid", H.name, False, witness=(i, r),
                                      witness_text=f"{h.name} undefined on {_fmt(h.algebra, r)}")
            v = h.mapping[r]
            if v & ~r or (r and not v):
                return PropertyReport("refinement-valid", H.name, False, witness=(i, r),
                                      witness_text=f"{h.name}({_fmt(h.algebra, r)}) = {_fmt(h.algebra, v)}")
    return PropertyReport("refinement-valid", H.name, True, detail="h(r) within r and non-empty for non-empty r")


def _maps_into(S: SubclassDef, T: SubclassDef, H: MultiRefinement) -> PropertyReport:
    if S.is_product and T.is_product:
        for i, h in enumerate(H.parts):
            for r in sorted(S.slices[i]):
                if h(r) not in T.slices[i]:
                    return PropertyReport("maps-into-target", f"{S.name} -> {T.name}", False, witness=(i, r),
                                          witness_text=f"{h.name}({_fmt(h.algebra, r)}) = {_fmt(h.algebra, h(r))} not in slice {i + 1} of {T.name}")
        return PropertyReport("maps-into-target", f"{S.name} -> {T.name}", True)
    for R in S.members():
        if not T.contains_bits(H.apply_bits(R)):
            return PropertyReport("maps-into-target", f"{S.name} -> {T.name}", False, witness=R,
                                  witness_text=f"H({S.ma.format_bits(R)}) not in {T.name}")
    return PropertyReport("maps-into-target", f"{S.name} -> {T.name}", True)


def certify_refinement(
    S: SubclassDef,
    target: TractabilityCertificate | None,
    H: MultiRefinement,
    weakening: Weakening | None = None,
    catalog: Catalog | None = None,
    backend: str | None = None,
) -> TractabilityCertificate:
    """Refinement theorem through ``H`` onto an already certified subclass."""
    ma = S.ma if weakening is None else weakening.weak
    theorem = "weakened-refinement" if weakening is not None else "refinement"
    conds: list[PropertyReport] = []
    conds.append(PropertyReport("product-form", S.name, S.is_product, detail="S is a product of slice sets"))
    if weakening is not None:
        conds.append(PropertyReport("weakening", weakening.name, weakening.base == S.ma and is_weakening(S.ma, ma),
                                    detail=f"{ma.name} weakens {S.ma.name}"))
    if target is None:
        conds.append(PropertyReport("target-tractable", "(none)", False, method="refused",
                                    detail="no certificate for the target subclass"))
    else:
        ok = target.valid_for(S.ma)
        conds.append(PropertyReport("target-tractable", target.subclass.name, ok, method="certificate",
                                    detail=target.summary() if ok else "certificate issued for another multi-algebra"))
    conds.append(_refinement_valid(S, H))
    if target is not None:
        conds.append(_maps_into(S, target.subclass, H))
    closure = check_subclass_closure(S)
    conds.append(closure)
    comp_reports = []
    for i in range(S.ma.m):
        rep = check_composition_stable(S.slice(i), H.parts[i], backend=backend)
        comp_reports.append(rep)
        conds.append(rep)
    proj = check_projection_stable(S, H, ma)
    conds.append(proj)
    convc = check_conv_closed(S, ma)
    conds.append(convc)
    conds.append(_derived("algebraically-stable", S.name, comp_reports + [proj],
                          "composition stable per slice and projection stable per bi-slice"))
    conds.append(_derived("circ-cap-closed", S.name, [closure], "subclass"))
    if all(c.holds for c in conds):
        return TractabilityCertificate(S, theorem, conds, weakening=weakening, refinement=H, target=target)
    raise CertificationRefused(S.name, theorem, conds)


def check_property(
    S: SubclassDef,
    prop: str,
    catalog: Catalog | None = None,
    weakening: Weakening | None = None,
    force: bool = False,
    jobs: int = 1,
    refinement: MultiRefinement | None = None,
) -> list[PropertyReport]:
    """Dispatch used by the command line; returns one report per item checked."""
    catalog = catalog or load_catalog()
    ma = weakening.weak if weakening else S.ma
    if prop == "subclass-closure":
        return [check_subclass_closure(S)]
    if prop == "basic-subset":
        return [check_basic_subset(S)]
    if prop == "circ-cap-closed":
        return [check_circ_cap_closed(S)]
    if prop == "atomizable":
        return [check_atomizable(S, check_basic_subset(S), check_declared_complete(S.ma, catalog))]
    if prop == "conv-closed":
        return [check_conv_closed(S, ma)]
    if prop == "conv-distributive":
        return [check_conv_distributive(S, ma)]
    if prop == "uniform":
        return [check_uniform(a) for a in S.ma.components]
    if prop == "dissociable":
        return [check_dissociable(S, ma, force=force, jobs=jobs)]
    if prop in ("composition-stable", "projection-stable", "conv-invariant"):
        H = refinement or catalog.multi_refinement(S)
        if prop == "composition-stable":
            return [check_composition_stable(S.slice(i), H.parts[i]) for i in range(S.ma.m)]
        if prop == "projection-stable":
            return [check_projection_stable(S, H, ma)]
        return [check_conv_invariant(S, H, ma)]
    if prop == "plenary-tree":
        return [check_plenary_tree(ma)]
    if prop == "declared-minimal":
        return [check_declared_minimal(S)]
    if prop == "declared-complete":
        return [check_declared_complete(S.ma, catalog)]
    raise ValueError(f"unknown property {prop!r}; expected one of {', '.join(PROPERTIES)}")
