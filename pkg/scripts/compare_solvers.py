#!/usr/bin/env python3
"""Quick head-to-head of the constructive and annealing solvers.

Generates the desk-scale benchmark instances, solves each with both
algorithms, and prints one line per instance plus a paired t-test on the
objective columns.

Usage:
    python scripts/compare_solvers.py [--iters N] [--seed S]
"""

import argparse

from circlebin.asags import AnnealParams
from circlebin.bench import BenchConfig, experiment_t_test, run_experiment


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--iters", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n0-max", type=int, default=12)
    args = ap.parse_args()

    params = AnnealParams(n_iters=args.iters, seed=args.seed)
    for family in ("r_eq_i", "r_eq_sqrt_i"):
        for mode in ("fixed", "random"):
            cfg = BenchConfig(family=family, mode=mode,
                              n0_range=(8, args.n0_max), seed=args.seed)
            rows = run_experiment(cfg, params)
            by_n0 = {}
            for r in rows:
                by_n0.setdefault(r.n0, {})[r.algorithm] = r
            print(f"\n{family} / {mode}")
            for n0, pair in sorted(by_n0.items()):
                t, a = pair["TOA"], pair["ASAGS"]
                mark = "+" if a.F > t.F else ("=" if a.F == t.F else "-")
                print(f"  n0={n0:<3} n={t.n:<4} K {len(t.densities)}->"
                      f"{len(a.densities)}  F {t.F:8.3f} -> {a.F:8.3f}  [{mark}]")
            tt = experiment_t_test(rows)
            print(f"  paired t-test: t={tt.t_stat:.4f} dof={tt.dof} "
                  f"p={tt.p_value:.4g}")


if __name__ == "__main__":
    main()
