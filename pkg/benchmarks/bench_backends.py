#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure NumPy/Python fallbacks.

Runs every workload twice in fresh subprocesses, once per backend (the
``GRGCYCLES_NO_NUMBA`` flag is read at import time), and prints a timing
table.  JIT compilation is warmed up before timing so the numbers compare
steady-state throughput.

    python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOADS = ("triangles", "four_cycles", "bound_terms", "census_run")


def run_workload(name, repeat):
    import grgcycles as g
    from grgcycles.chen_stein import _candidate_arrays
    from grgcycles import _kernels

    spec = g.WeightSpec.pareto_shifted(9.5, 10, 1)
    if name == "triangles":
        wv = g.sample_weights(spec, 1500, 1)
        graph = g.sample_grg(wv, 2)
        job = lambda: g.count_triangles(graph).count
    elif name == "four_cycles":
        wv = g.sample_weights(spec, 500, 3)
        graph = g.sample_grg(wv, 4)
        job = lambda: g.count_k_cycles(graph, 4).count
    elif name == "bound_terms":
        wv = g.sample_weights(spec, 40, 5)
        arrays = _candidate_arrays(wv, 3, 10**6)
        job = lambda: _kernels.bound_terms(*arrays)
    elif name == "census_run":
        from grgcycles.experiments import ExperimentConfig, run_census
        cfg = ExperimentConfig(spec=spec, n=300, k=3, replications=20, seed=9)
        job = lambda: run_census(cfg).summary["mean"]
    else:
        raise ValueError(name)

    result = job()          # warm-up (includes any JIT compilation)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        job()
        best = min(best, (time.perf_counter() - t0) * 1e3)
    flat = list(result) if isinstance(result, tuple) else [result]
    return {"workload": name, "backend": "numba" if g.USING_NUMBA else "numpy",
            "best_ms": best, "result": [float(v) for v in flat]}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--workload", choices=WORKLOADS)
    args = parser.parse_args()

    if args.workload:
        print(json.dumps(run_workload(args.workload, args.repeat)))
        return

    records = []
    for workload in WORKLOADS:
        for flag in ("0", "1"):
            env = dict(os.environ, GRGCYCLES_NO_NUMBA=flag)
            proc = subprocess.run(
                [sys.executable, __file__, "--workload", workload,
                 "--repeat", str(args.repeat)],
                env=env, capture_output=True, text=True, check=True)
            records.append(json.loads(proc.stdout.strip().splitlines()[-1]))

    print(f"{'workload':<14}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for workload in WORKLOADS:
        times = {r["backend"]: r["best_ms"] for r in records
                 if r["workload"] == workload}
        results = {r["backend"]: r["result"] for r in records
                   if r["workload"] == workload}
        for a, b in zip(results["numba"], results["numpy"]):
            # integer counts match exactly; float sums only up to
            # accumulation order
            assert a == b or abs(a - b) <= 1e-9 * max(abs(a), abs(b)), \
                f"backend mismatch on {workload}: {results}"
        speedup = times["numpy"] / times["numba"]
        print(f"{workload:<14}{times['numba']:>12.2f}{times['numpy']:>12.2f}"
              f"{speedup:>9.1f}x")
    print("results agree across backends")


if __name__ == "__main__":
    main()
