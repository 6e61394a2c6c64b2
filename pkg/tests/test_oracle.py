import random

import pytest

from qcr.files import read_network
from qcr.multialg import MultiAlgebra
from qcr.oracle import (
    brute_force_sat,
    count_closed_scenarios,
    falsify_minimality,
    minimal_network_classical,
    random_network,
    random_relation,
)
from qcr.qcn import Network, Refused, algebraic_closure, enumerate_closed_scenarios, refines, satisfiable


def test_figures(cat):
    assert not brute_force_sat(read_network("fig7a", cat)).satisfiable
    res = brute_force_sat(read_network("fig7a_dc", cat))
    assert res.satisfiable and res.assumption


def test_single_closed_edge(stc):
    N = Network(stc, ["x", "y"])
    N.set("x", "y", stc.parse("{EQ} ; {=}"))
    res = brute_force_sat(N)
    assert res.satisfiable and res.witness == N


def test_refuses_without_completeness(cat):
    with pytest.raises(Refused):
        brute_force_sat(read_network("tpc3", cat))
    assert not brute_force_sat(read_network("tpc3_neq", cat)).satisfiable


def test_pruned_agrees(stc):
    rng = random.Random(5)
    for _ in range(30):
        N = random_network(stc, 4, rng)
        a = brute_force_sat(N, pruned=False)
        b = brute_force_sat(N, pruned=True)
        assert a.satisfiable == b.satisfiable


def test_scenario_count_matches_qcn(stc):
    rng = random.Random(9)
    for _ in range(20):
        N = random_network(stc, 4, rng)
        assert count_closed_scenarios(N) == sum(1 for _ in enumerate_closed_scenarios(N))


def test_fig4_minimal(cat):
    N = read_network("fig4", cat)
    M = minimal_network_classical(N)
    assert M == read_network("fig4_minimal", cat)
    assert refines(M, algebraic_closure(N)) and refines(algebraic_closure(N), N)


def test_minimal_of_scenario_and_inconsistent(cat, pa):
    N = read_network("fig4", cat)
    S = next(enumerate_closed_scenarios(N))
    assert minimal_network_classical(S) == S
    ma = MultiAlgebra.mono(pa)
    B = Network(ma, ["a", "b", "c"])
    B.set("a", "b", (pa.bits_of(["<"]),))
    B.set("b", "c", (pa.bits_of(["<"]),))
    B.set("a", "c", (pa.bits_of([">"]),))
    M = minimal_network_classical(B)
    assert all(bits == (0,) for _, _, bits in M.edges())


def test_random_relation_nonempty(stc):
    rng = random.Random(1)
    for _ in range(200):
        assert all(random_relation(stc, rng))


def test_falsification(cat):
    rep = falsify_minimality(cat.subclass("PA_s"), trials=500, n_max=4, seed=0)
    assert not rep.refuted and rep.trials_run == 500
    rep = falsify_minimality(cat.subclass("RCC8_s"), trials=200, n_max=4, seed=0)
    assert not rep.refuted
    rep = falsify_minimality(cat.subclass("PA"), trials=0, extra_networks=[read_network("fig4", cat)])
    assert rep.refuted and rep.source == "supplied network"


def test_falsification_reproducible(cat):
    a = falsify_minimality(cat.subclass("PA"), trials=300, n_max=5, seed=4)
    b = falsify_minimality(cat.subclass("PA"), trials=300, n_max=5, seed=4)
    assert a.format() == b.format()


def test_oracle_matches_backtrack(stc):
    rng = random.Random(21)
    for _ in range(40):
        N = random_network(stc, 4, rng)
        assert brute_force_sat(N).satisfiable == satisfiable(N, "backtrack").satisfiable
