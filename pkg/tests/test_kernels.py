import random

import pytest

from qcr import analysis as an
from qcr import kernels
from qcr.oracle import brute_force_sat, random_network

needs_cython = pytest.mark.skipif("cython" not in kernels.available_backends(), reason="extension not built")


def test_backend_selection():
    assert kernels.BACKEND in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.get("fortran")


@needs_cython
def test_scenario_scan_backends_agree(stc):
    rng = random.Random(2)
    for _ in range(30):
        N = random_network(stc, 4, rng)
        for pruned in (False, True):
            a = brute_force_sat(N, pruned=pruned, backend="python")
            b = brute_force_sat(N, pruned=pruned, backend="cython")
            assert (a.satisfiable, a.scenarios_checked) == (b.satisfiable, b.scenarios_checked)
            assert a.witness == b.witness


@needs_cython
def test_dissociability_backends_agree(cat):
    S = cat.subclass("RCC8s_x_PAs")
    for backend in ("python", "cython"):
        rep = an.check_dissociable(S, backend=backend)
        assert not rep.holds
        assert rep.witness is not None
    a = an.check_dissociable(S, backend="python")
    b = an.check_dissociable(S, backend="cython")
    assert (a.cost, a.witness) == (b.cost, b.witness)


@needs_cython
def test_composition_stability_backends_agree(cat):
    for name, h in (("PA", "h_max"), ("H8", "h_H8")):
        S = cat.subclass(name)
        a = an.check_composition_stable(S, cat.refinement(h), backend="python")
        b = an.check_composition_stable(S, cat.refinement(h), backend="cython")
        assert a.holds and b.holds and a.cost == b.cost


def test_parallel_dissociability_matches_serial(cat):
    S = cat.subclass("RCC8s_x_PAs")
    w = cat.weakening("stc-weak-pa2rcc").weak
    serial = an.check_dissociable(S, w, jobs=1)
    parallel = an.check_dissociable(S, w, jobs=2)
    assert serial.holds and parallel.holds and serial.cost == parallel.cost
    raw_serial = an.check_dissociable(S, jobs=1, stop_first=False)
    raw_parallel = an.check_dissociable(S, jobs=2, stop_first=False)
    assert raw_serial.witness == raw_parallel.witness


def test_benchmark_script_runs():
    import subprocess
    import sys
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    r = subprocess.run([sys.executable, str(script), "--rows", "1", "--networks", "2"],
                       capture_output=True, text=True, timeout=300)
    assert r.returncode == 0, r.stderr
    assert "DIFFER" not in r.stdout
