"""Compare the compiled and pure-Python enumeration kernels.

Each workload runs once per backend on identical inputs; results must be
identical and the wall-clock times are printed side by side.

    python benchmarks/bench_kernels.py [--rows N] [--networks N]
"""

from __future__ import annotations

import argparse
import random
import time

from qcr import analysis as an
from qcr import kernels
from qcr.catalog import load_catalog
from qcr.oracle import _Problem, random_network


def _time(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def dissociability_workload(cat, rows: int):
    S = cat.subclass("RCC8s_x_PAs")
    ma = cat.weakening("stc-weak-pa2rcc").weak
    a, b = ma.components
    elems = an._bislice_elements(ma, 0, 1, sorted(S.slices[0]), sorted(S.slices[1]))
    args = (
        kernels.u64(x for x, _ in elems), kernels.u64(y for _, y in elems),
        kernels.u64(a.lifted_composition), kernels.u64(a.lifted_converse),
        kernels.u64(b.lifted_composition), kernels.u64(b.lifted_converse),
        kernels.u64(ma.proj(0, 1).lifted), kernels.u64(ma.proj(1, 0).lifted),
        a.n, b.n, 0, min(rows, len(elems)), False,
    )
    label = f"dissociability, weakened RCC8_s x PA_s, {min(rows, len(elems))}/{len(elems)} rows"
    return label, lambda backend: kernels.get(backend).dissociability_scan(*args)


def stability_workload(cat):
    S = cat.subclass("H8")
    h = cat.refinement("h_H8")
    a = S.ma.components[0]
    rels = sorted(S.slices[0])
    args = (
        kernels.u64(rels), kernels.u64(h.mapping[r] for r in rels),
        kernels.u64(a.lifted_composition), kernels.u64(a.lifted_converse), a.n, False,
    )
    return "composition stability, H8 through h_H8", lambda backend: kernels.get(backend).composition_stability_scan(*args)


def scenario_workload(cat, count: int):
    stc = cat.multialgebra("STC")
    rng = random.Random(7)
    problems = [_Problem(random_network(stc, 4, rng)) for _ in range(count)]

    def run(backend):
        return [p.run(False, True, backend)[:2] for p in problems]

    return f"scenario enumeration, {count} random STC networks (n=4)", run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=8, help="first-index rows of the dissociability scan")
    ap.add_argument("--networks", type=int, default=20)
    args = ap.parse_args()
    cat = load_catalog()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    workloads = [
        dissociability_workload(cat, args.rows),
        stability_workload(cat),
        scenario_workload(cat, args.networks),
    ]
    for label, fn in workloads:
        results = {}
        times = {}
        for backend in backends:
            results[backend], times[backend] = _time(lambda: fn(backend))
        same = len({repr(r) for r in results.values()}) == 1
        line = f"{label}: " + ", ".join(f"{b} {t:.3f}s" for b, t in times.items())
        if "cython" in times and times["cython"] > 0:
            line += f", speedup x{times['python'] / times['cython']:.0f}"
        line += "" if same else "  RESULTS DIFFER"
        print(line)


if __name__ == "__main__":
    main()
