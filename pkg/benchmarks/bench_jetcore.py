"""Compiled jet kernels against the numpy fallback.

Kernel timings import both modules directly. End-to-end timings run a
residual sweep and a bracket sweep in a subprocess per backend, since the
backend is fixed at import.

    python3 benchmarks/bench_jetcore.py [--repeat 5] [--json out.json]
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from magint import _jetcore_py
from magint.jets import ncoef

try:
    from magint import _jetcore
except ImportError:
    _jetcore = None

WORKLOAD = r"""
import time
from magint._kernels import BACKEND
from magint.families import PolarCase2Params, YSelector, build_polar_case2
from magint.verify import poisson_bracket, random_phase_states, residual_second_order, sample_points
fam = build_polar_case2(PolarCase2Params(YSelector("zero-simple", roots=(2.0, 1.0, 0.0)), rmin=0.5, rmax=2.0))
pts = sample_points(fam.domain, 100, seed=1)
states = random_phase_states(fam.domain, 200, seed=2)
best = {}
for _ in range({repeat}):
    t = time.perf_counter(); residual_second_order(fam.physical, fam.integral, 1.0, pts)
    best["residuals_100pts"] = min(best.get("residuals_100pts", 1e9), time.perf_counter() - t)
    t = time.perf_counter(); [poisson_bracket(fam.gauge, fam.integral, s) for s in states]
    best["brackets_200"] = min(best.get("brackets_200", 1e9), time.perf_counter() - t)
print(BACKEND, best["residuals_100pts"], best["brackets_200"])
"""


def kernel_times(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in (2, 4, 6):
        k = ncoef(n)
        p, q = rng.normal(size=k), rng.normal(size=k)
        g = rng.normal(size=n + 1)
        for name, call in (
            ("mul2", lambda m: m.mul2(p, q, n)),
            ("horner2", lambda m: m.horner2(g, p, n)),
        ):
            row = {"kernel": name, "order": n}
            for label, mod in (("python", _jetcore_py), ("cython", _jetcore)):
                if mod is None:
                    continue
                number = 2000
                t = min(timeit.repeat(lambda: call(mod), number=number, repeat=repeat)) / number
                row[label] = t
            rows.append(row)
    return rows


def workload_times(repeat):
    out = {}
    for force in (False, True):
        env = dict(os.environ)
        env.pop("MAGINT_PURE_PYTHON", None)
        if force:
            env["MAGINT_PURE_PYTHON"] = "1"
        res = subprocess.run(
            [sys.executable, "-c", WORKLOAD.replace("{repeat}", str(repeat))],
            env=env, capture_output=True, text=True, check=True,
        )
        backend, resid, br = res.stdout.split()
        out[backend] = {"residuals_100pts": float(resid), "brackets_200": float(br)}
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)

    kernels = kernel_times(args.repeat)
    print(f"{'kernel':<8} {'order':>5} {'python us':>10} {'cython us':>10} {'speedup':>8}")
    for r in kernels:
        py, cy = r["python"] * 1e6, r.get("cython", float("nan")) * 1e6
        print(f"{r['kernel']:<8} {r['order']:>5} {py:>10.2f} {cy:>10.2f} {py / cy:>8.1f}")

    work = workload_times(args.repeat)
    print()
    for task in ("residuals_100pts", "brackets_200"):
        py = work["python"][task]
        cy = work.get("cython", {}).get(task, float("nan"))
        print(f"{task:<18} python {py:8.3f} s   cython {cy:8.3f} s   speedup {py / cy:5.2f}")
    if _jetcore is None:
        print("\ncompiled extension not built; only the fallback was timed")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"kernels": kernels, "workloads": work}, fh, indent=2)


if __name__ == "__main__":
    main()
