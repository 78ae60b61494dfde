"""Benchmark the compiled simplex kernels against the numpy fallback.

Run:  python benchmarks/bench_kernels.py [--sizes 500,1500,3000]

Reports per-operation timings for both backends plus an end-to-end solve
of a generated desk-scale network LP under each backend.
"""

from __future__ import annotations

import argparse
import importlib
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np


def time_op(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(sizes):
    from orir.solver import _kernels_py as py
    try:
        from orir.solver import _kernels as cy
    except ImportError:
        print("compiled kernels unavailable; build with pip install -e .")
        return
    rng = np.random.default_rng(0)
    print(f"{'op':<18}{'m':>6}  {'numpy':>10}  {'compiled':>10}  {'speedup':>8}")
    for m in sizes:
        binv = np.ascontiguousarray(rng.standard_normal((m, m)))
        w = rng.standard_normal(m)
        w[m // 2] += 5.0
        r = m // 2
        t_py = time_op(lambda: py.pivot_update(binv.copy(), w, r), repeats=3)
        t_cy = time_op(lambda: cy.pivot_update(binv.copy(), w, r), repeats=3)
        print(f"{'pivot_update':<18}{m:>6}  {t_py*1e3:>8.2f}ms  "
              f"{t_cy*1e3:>8.2f}ms  {t_py/t_cy:>7.2f}x")

        idx = np.sort(rng.choice(m, size=8, replace=False)).astype(np.int64)
        vals = rng.standard_normal(8)
        t_py = time_op(lambda: py.ftran(binv, idx, vals))
        t_cy = time_op(lambda: cy.ftran(binv, idx, vals))
        print(f"{'ftran':<18}{m:>6}  {t_py*1e6:>8.1f}us  "
              f"{t_cy*1e6:>8.1f}us  {t_py/t_cy:>7.2f}x")

        beta = rng.uniform(0, 5, m)
        lb = np.zeros(m)
        ub = np.full(m, np.inf)
        dirw = rng.standard_normal(m)
        t_py = time_op(lambda: py.primal_ratio(dirw, beta, lb, ub, 1e-9))
        t_cy = time_op(lambda: cy.primal_ratio(dirw, beta, lb, ub, 1e-9))
        print(f"{'primal_ratio':<18}{m:>6}  {t_py*1e6:>8.1f}us  "
              f"{t_cy*1e6:>8.1f}us  {t_py/t_cy:>7.2f}x")

        n = 4 * m
        d = rng.standard_normal(n)
        status = rng.integers(0, 3, n).astype(np.int8)
        t_py = time_op(lambda: py.price(d, status, 1e-9, False))
        t_cy = time_op(lambda: cy.price(d, status, 1e-9, False))
        print(f"{'price':<18}{n:>6}  {t_py*1e6:>8.1f}us  "
              f"{t_cy*1e6:>8.1f}us  {t_py/t_cy:>7.2f}x")


def bench_solve():
    from orir.build import compile_model
    from orir.data import load_tables
    from orir.gen import gen_lp_network, LpNetworkConfig
    from orir.ir import parse_ir

    out = Path(tempfile.mkdtemp()) / "bench_lp"
    gen_lp_network(LpNetworkConfig(
        seed=42, sites=4, dcs=4, customers=12, products=8, periods=12,
        ps_fanout=2, dc_fanout=5, clusters=4), out)
    model = parse_ir((out / "ir.json").read_text())
    store = load_tables(out / "data")
    print(f"\n{'end-to-end LP solve':<28}{'time':>10}  {'iterations':>11}")
    for pure, label in (("", "compiled"), ("1", "numpy-fallback")):
        os.environ["ORIR_PURE_PYTHON"] = pure
        from orir.solver import branch_bound, kernels, lp, simplex
        importlib.reload(kernels)
        importlib.reload(simplex)
        importlib.reload(lp)
        importlib.reload(branch_bound)
        cm = compile_model(model, store)
        start = time.perf_counter()
        sol = lp.solve_lp(cm)
        elapsed = time.perf_counter() - start
        print(f"{label:<28}{elapsed:>9.2f}s  {sol.iterations:>11}")
        assert sol.status == "optimal"
    os.environ.pop("ORIR_PURE_PYTHON", None)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="500,1500,3000")
    parser.add_argument("--skip-solve", action="store_true")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes)
    if not args.skip_solve:
        bench_solve()


if __name__ == "__main__":
    sys.exit(main())
