"""Brute-force ground truth, kept independent of the search in ``qcn``.

Scenarios are enumerated in mixed-radix order over the edges (sorted by
number of candidates); each complete scenario is checked triangle by
triangle.  The only filtering done before enumeration is per edge: a basic
multi-relation that is not closed under projection can never be part of an
algebraically closed scenario, so it is dropped from the edge's candidates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from . import kernels
from .multialg import MultiAlgebra
from .qcn import Network, Refused, algebraic_closure, is_trivially_inconsistent

DEFAULT_BOUND = 5 * 10**8
DEFAULT_P = 0.5


@dataclass
class OracleResult:
    satisfiable: bool
    witness: Network | None
    scenarios_checked: int
    closed_scenarios: int = 0
    assumption: str | None = None

    @property
    def label(self) -> str:
        return "SAT" if self.satisfiable else "UNSAT"


def _lookup_completeness(ma: MultiAlgebra, completeness):
    if completeness == "catalog":
        from .catalog import load_catalog

        return load_catalog().completeness_for(ma)
    return completeness


def _basic_closed(ma: MultiAlgebra, atoms: Sequence[int]) -> bool:
    for (i, j), p in ma.projections.items():
        if not (p.table[atoms[i]] >> atoms[j]) & 1:
            return False
    return True


def _edge_candidates(ma: MultiAlgebra, bits: Sequence[int]) -> list[tuple[int, ...]]:
    per_comp = [[a for a in range(alg.n) if (b >> a) & 1] for alg, b in zip(ma.components, bits)]
    return [atoms for atoms in product(*per_comp) if _basic_closed(ma, atoms)]


class _Problem:
    """Flat tables for the scenario kernel."""

    def __init__(self, N: Network):
        ma = N.ma
        self.N = N
        self.m = ma.m
        pairs = list(combinations(range(N.n), 2))
        cands = {p: _edge_candidates(ma, N.get(*p)) for p in pairs}
        order = sorted(pairs, key=lambda p: (len(cands[p]), p))
        self.order = order
        self.cands = [cands[p] for p in order]
        pos = {p: t for t, p in enumerate(order)}
        self.space = 1
        for c in self.cands:
            self.space *= len(c)
        tris = []
        for i, j, k in combinations(range(N.n), 3):
            e = (pos[(i, j)], pos[(j, k)], pos[(i, k)])
            tris.append((max(e), e))
        tris.sort()
        n_edges = len(order)
        starts = [0] * (n_edges + 1)
        for hi, _ in tris:
            starts[hi + 1] += 1
        for p in range(n_edges):
            starts[p + 1] += starts[p]
        self.counts = kernels.i32(len(c) for c in self.cands)
        offs, acc = [], 0
        for c in self.cands:
            offs.append(acc)
            acc += len(c)
        self.offsets = kernels.i32(offs)
        self.total = acc
        self.atoms = kernels.i32(a for c in self.cands for cand in c for a in cand)
        self.tri = kernels.i32(x for _, e in tris for x in e)
        self.tri_start = kernels.i32(starts)
        comp, comp_off, natoms, conv, conv_off = [], [], [], [], []
        for alg in ma.components:
            comp_off.append(len(comp))
            conv_off.append(len(conv))
            natoms.append(alg.n)
            for a in range(alg.n):
                comp.extend(alg.atom_comp[a])
            conv.extend(alg.converse_atoms)
        self.atom_comp = kernels.u64(comp)
        self.comp_off = kernels.i32(comp_off)
        self.natoms = kernels.i32(natoms)
        self.conv = kernels.i32(conv)
        self.conv_off = kernels.i32(conv_off)

    def run(self, pruned: bool, collect: bool, backend: str | None):
        choice = kernels.i32([0] * len(self.order))
        seen = kernels.u8(max(self.total, 1))
        checked, closed = kernels.get(backend).scenario_scan(
            self.counts, self.offsets, self.atoms, self.m, self.tri, self.tri_start,
            self.atom_comp, self.comp_off, self.natoms, self.conv, self.conv_off,
            pruned, collect, choice, seen,
        )
        return checked, closed, choice, seen

    def scenario(self, choice) -> Network:
        S = Network(self.N.ma, self.N.variables)
        for t, (i, j) in enumerate(self.order):
            atoms = self.cands[t][choice[t]]
            S.set(i, j, tuple(1 << a for a in atoms))
        return S


def brute_force_sat(
    N: Network,
    completeness="catalog",
    pruned: bool = False,
    bound: int = DEFAULT_BOUND,
    backend: str | None = None,
) -> OracleResult:
    """Is there an algebraically closed scenario refining ``N``?

    UNSAT is reported whatever the multi-algebra; SAT requires a declared
    completeness assumption (``"catalog"`` looks it up), otherwise the
    answer is refused.
    """
    assumption = _lookup_completeness(N.ma, completeness)
    if N.n <= 1:
        res = OracleResult(all(N.ma.full), N.copy() if all(N.ma.full) else None, 1, 1)
    else:
        prob = _Problem(N)
        if prob.space > bound:
            raise Refused(f"scenario space {prob.space} exceeds the oracle bound {bound}")
        checked, closed, choice, _ = prob.run(pruned, False, backend)
        witness = prob.scenario(choice) if closed else None
        res = OracleResult(bool(closed), witness, checked, closed)
    if res.satisfiable:
        if assumption is None:
            raise Refused("closed scenario found but no completeness assumption is declared")
        res.assumption = f"{assumption.statement} ({assumption.citation})"
    return res


def count_closed_scenarios(N: Network, bound: int = DEFAULT_BOUND, backend: str | None = None) -> int:
    prob = _Problem(N)
    if prob.space > bound:
        raise Refused(f"scenario space {prob.space} exceeds the oracle bound {bound}")
    return prob.run(False, True, backend)[1]


def minimal_network_classical(
    N: Network,
    completeness="catalog",
    pruned: bool = False,
    bound: int = DEFAULT_BOUND,
    backend: str | None = None,
) -> Network:
    """Keep an atom on an edge iff some closed scenario of ``N`` uses it."""
    if N.ma.m != 1:
        raise ValueError("the minimal-network oracle handles single-algebra networks only")
    if _lookup_completeness(N.ma, completeness) is None:
        raise Refused(f"no completeness assumption declared for {N.ma.name}")
    out = Network(N.ma, N.variables)
    if N.n <= 1:
        return out
    prob = _Problem(N)
    if prob.space > bound:
        raise Refused(f"scenario space {prob.space} exceeds the oracle bound {bound}")
    _, closed, _, seen = prob.run(pruned, True, backend)
    for t, (i, j) in enumerate(prob.order):
        bits = 0
        for c, atoms in enumerate(prob.cands[t]):
            if seen[prob.offsets[t] + c]:
                bits |= 1 << atoms[0]
        out.set(i, j, (bits,))
    return out


# random networks ---------------------------------------------------------------


def random_relation(ma: MultiAlgebra, rng: random.Random, p: float = DEFAULT_P, member=None) -> tuple[int, ...]:
    """Each atom of each component kept with probability ``p``.

    Draws are repeated until every part is non-empty and, when ``member``
    is given, ``member(bits)`` holds.
    """
    while True:
        bits = tuple(
            sum(1 << a for a in range(alg.n) if rng.random() < p) for alg in ma.components
        )
        if 0 in bits:
            continue
        if member is None or member(bits):
            return bits


def random_network(
    ma: MultiAlgebra,
    n: int,
    rng: random.Random,
    p: float = DEFAULT_P,
    member=None,
    names: Sequence[str] | None = None,
) -> Network:
    names = list(names) if names else [f"v{i + 1}" for i in range(n)]
    N = Network(ma, names)
    for i, j in combinations(range(n), 2):
        N.set(i, j, random_relation(ma, rng, p, member))
    return N


# minimality falsification ------------------------------------------------------


@dataclass
class FalsificationReport:
    subclass: str
    trials: int
    n_max: int
    seed: int
    p: float
    trials_run: int = 0
    counterexample: Network | None = None
    closure: Network | None = None
    minimal: Network | None = None
    source: str | None = None
    extra_checked: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return self.counterexample is not None

    def format(self) -> str:
        head = (
            f"minimality of {self.subclass}: trials={self.trials} n_max={self.n_max} "
            f"seed={self.seed} p={self.p} extra={self.extra_checked}"
        )
        if not self.refuted:
            return head + f"\nno counterexample in {self.trials_run} trials\n"
        lines = [head, f"counterexample ({self.source}) after {self.trials_run} trials:"]
        lines.append(self.counterexample.format(skip_universal=False).rstrip())
        lines.append("algebraic closure:")
        lines.append(self.closure.format(skip_universal=False).rstrip())
        lines.append("minimal network:")
        lines.append(self.minimal.format(skip_universal=False).rstrip())
        return "\n".join(lines) + "\n"


def _minimality_gap(N: Network, completeness, backend) -> tuple[Network, Network] | None:
    closed = algebraic_closure(N)
    minimal = minimal_network_classical(N, completeness, backend=backend)
    if is_trivially_inconsistent(closed):
        # closure already detects inconsistency; the minimal network is empty too
        empty = all(bits == (0,) for _, _, bits in minimal.edges())
        return None if empty else (closed, minimal)
    return None if closed == minimal else (closed, minimal)


def falsify_minimality(
    subclass,
    trials: int = 500,
    n_max: int = 4,
    seed: int = 0,
    p: float = DEFAULT_P,
    extra_networks: Iterable[Network] = (),
    completeness="catalog",
    backend: str | None = None,
) -> FalsificationReport:
    """Look for a network over ``subclass`` whose closure is not its minimal network."""
    if subclass.ma.m != 1:
        raise ValueError("minimality is checked on single-algebra subclasses")
    if n_max < 3:
        raise ValueError("n_max must be at least 3")
    report = FalsificationReport(subclass.name, trials, n_max, seed, p)
    for N in extra_networks:
        report.extra_checked += 1
        if any(not subclass.contains_bits(bits) for _, _, bits in N.edges()):
            report.notes.append("extra network outside the subclass skipped")
            continue
        gap = _minimality_gap(N, completeness, backend)
        if gap:
            report.counterexample, (report.closure, report.minimal) = N, gap
            report.source = "supplied network"
            return report
    rng = random.Random(seed)
    for t in range(trials):
        n = rng.randint(3, n_max)
        N = random_network(subclass.ma, n, rng, p, subclass.contains_bits)
        report.trials_run = t + 1
        gap = _minimality_gap(N, completeness, backend)
        if gap:
            report.counterexample, (report.closure, report.minimal) = N, gap
            report.source = f"random trial {t + 1}"
            return report
    return report
