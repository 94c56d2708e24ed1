"""Command-line interface.

Subcommands: generate, solve, validate, render, bench.

Exit codes (stable contract): 0 success, 1 usage or parse failure,
2 I/O failure, 3 infeasibility or solver-integrity failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import asags, bench, io, render, toa
from .model import objective, validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; our contract is 1
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _default_seed() -> int:
    env = os.environ.get("CBPP_SEED")
    return int(env) if env else 0


def _read_instance(path: str):
    p = Path(path)
    if not p.is_file():
        raise _CliError(EXIT_USAGE, f"no such file: {path}")
    try:
        return io.read_instance(p)
    except io.FormatError as e:
        raise _CliError(EXIT_USAGE, f"bad instance file: {e}") from e


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise _CliError(EXIT_IO, f"cannot write {path}: {e}") from e


def _load_bench_configs(config_path: str, seed_override: int | None):
    p = Path(config_path)
    if not p.is_file():
        raise _CliError(EXIT_USAGE, f"no such file: {config_path}")
    try:
        raw = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise _CliError(EXIT_USAGE, f"bad config: {e}") from e
    try:
        seed = seed_override if seed_override is not None else raw.get("seed", 0)
        table = raw.get("bin_radius_table")
        configs = []
        for family in raw["families"]:
            for mode in raw["modes"]:
                fam_table = None
                if table:
                    fam_table = {int(k): float(v) for k, v in table[family].items()}
                configs.append(
                    bench.BenchConfig(
                        family=family,
                        mode=mode,
                        n0_range=tuple(raw["n0_range"]),
                        bin_radius_table=fam_table,
                        seed=seed,
                        copies_range=tuple(raw.get("copies_range", (2, 10))),
                    )
                )
        return configs
    except (KeyError, TypeError, ValueError) as e:
        raise _CliError(EXIT_USAGE, f"bad config: {e}") from e


def _anneal_params(args) -> asags.AnnealParams:
    return asags.AnnealParams(
        t_start=args.t_start,
        t_end=args.t_end,
        n_iters=args.iters,
        alpha=args.alpha,
        beta=args.beta,
        delta_theta_fixed=args.delta_theta,
        adaptive_span=args.adaptive_span,
        seed=args.seed if args.seed is not None else _default_seed(),
    )


def _add_anneal_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $CBPP_SEED or 0)")
    p.add_argument("--iters", type=int, default=2_000_000,
                   help="neighbor-generation budget N")
    p.add_argument("--t-start", type=float, default=0.1)
    p.add_argument("--t-end", type=float, default=1e-4)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--beta", type=float, default=0.08)
    p.add_argument("--delta-theta", type=float, default=None,
                   help="fixed sector span in degrees (default: random 20-60)")
    p.add_argument("--adaptive-span", action="store_true",
                   help="anneal the sector span from 60 to 20 degrees")


def cmd_generate(args) -> int:
    configs = _load_bench_configs(args.config, args.seed)
    out_dir = Path(args.out_dir)
    for cfg in configs:
        for n0 in cfg.n0_values():
            inst = bench.generate_instance(cfg, n0, bench.instance_rng(cfg, n0))
            _write_text(out_dir / f"{inst.name}.instance.json",
                        json.dumps(io.instance_to_dict(inst), indent=2,
                                   sort_keys=True) + "\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    t0 = time.perf_counter()
    if args.algo == "toa":
        sol = toa.construct(inst)
    else:
        sol, _ = asags.run(inst, _anneal_params(args))
    elapsed = time.perf_counter() - t0
    report = validate(sol)
    if not report.feasible:
        print(f"solver integrity failure:\n{report}", file=sys.stderr)
        return EXIT_INFEASIBLE
    m = objective(sol)
    if args.out:
        _write_text(Path(args.out),
                    json.dumps(io.solution_to_dict(sol), indent=2,
                               sort_keys=True) + "\n")
    print(f"K={m.k_used} F={m.f_obj:.2f} time={elapsed:.3f}")
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = _read_instance(args.instance)
    p = Path(args.solution)
    if not p.is_file():
        raise _CliError(EXIT_USAGE, f"no such file: {args.solution}")
    try:
        sol = io.read_solution(p, inst)
    except io.FormatError as e:
        raise _CliError(EXIT_USAGE, f"bad solution file: {e}") from e
    report = validate(sol)
    if report.feasible:
        print("OK")
        return EXIT_OK
    for v in report.violations:
        print(str(v))
    return EXIT_INFEASIBLE


def cmd_render(args) -> int:
    inst = _read_instance(args.instance)
    p = Path(args.solution)
    if not p.is_file():
        raise _CliError(EXIT_USAGE, f"no such file: {args.solution}")
    try:
        sol = io.read_solution(p, inst)
    except io.FormatError as e:
        raise _CliError(EXIT_USAGE, f"bad solution file: {e}") from e
    report = validate(sol)
    if not report.feasible:
        print(f"refusing to render an infeasible solution:\n{report}",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    _write_text(Path(args.out), render.render_svg(sol))
    return EXIT_OK


def cmd_bench(args) -> int:
    configs = _load_bench_configs(args.config, args.seed)
    params = _anneal_params(args)
    algorithms = ("TOA",) if args.algo == "toa" else (
        ("ASAGS",) if args.algo == "asags" else ("TOA", "ASAGS"))
    out_dir = Path(args.out_dir)
    all_rows = []
    summary_lines = []
    for cfg in configs:
        solutions: dict = {}
        stats: dict = {}
        try:
            rows = bench.run_experiment(cfg, params, algorithms, solutions,
                                        stats_out=stats)
        except RuntimeError as e:
            print(f"[{cfg.family}/{cfg.mode}] {e}", file=sys.stderr)
            return EXIT_INFEASIBLE
        all_rows.extend(rows)
        for (name, alg), sol in solutions.items():
            _write_text(out_dir / f"{name}.{alg}.solution.json",
                        json.dumps(io.solution_to_dict(sol), indent=2,
                                   sort_keys=True) + "\n")
            _write_text(out_dir / f"{name}.{alg}.svg", render.render_svg(sol))
        for (name, alg), st in stats.items():
            trace = "\n".join(
                f"{i},{t:.8g},{f:.8g},{k}" for i, t, f, k in st.f_trace
            )
            _write_text(out_dir / f"{name}.{alg}.trace.csv",
                        "iteration,t_current,f,K\n" + trace + "\n")
        if len(algorithms) == 2:
            try:
                tt = bench.experiment_t_test(rows)
            except ValueError as e:
                summary_lines.append(f"{cfg.family}/{cfg.mode}: t-test skipped ({e})")
            else:
                summary_lines.append(
                    f"{cfg.family}/{cfg.mode}: t={tt.t_stat:.4f} dof={tt.dof} "
                    f"p={tt.p_value:.6g} ({tt.variant})"
                )
    # results.csv/.md are pure functions of (config, params, seed); measured
    # wall times go in their own file so reruns stay byte-identical.
    _write_text(out_dir / "results.csv",
                bench.emit_tables(all_rows, "csv", include_runtime=False))
    _write_text(out_dir / "results.md",
                bench.emit_tables(all_rows, "markdown", include_runtime=False))
    _write_text(out_dir / "timings.csv",
                bench.emit_tables(all_rows, "csv", include_runtime=True))
    if summary_lines:
        _write_text(out_dir / "ttest_summary.txt", "\n".join(summary_lines) + "\n")
    print(f"wrote {len(all_rows)} result rows to {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="circlebin",
                     description="Circle bin packing: TOA and ASA-GS solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[], help="generate benchmark instances")
    p.add_argument("config", help="benchmark config JSON")
    p.add_argument("out_dir")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve one instance")
    p.add_argument("instance")
    p.add_argument("--algo", choices=("toa", "asags"), default="asags")
    p.add_argument("--out", default=None, help="solution output path")
    _add_anneal_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a solution against its instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="render a solution to SVG")
    p.add_argument("solution")
    p.add_argument("out")
    p.add_argument("--instance", required=True,
                   help="instance file (radii are not stored in solutions)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="run the benchmark harness")
    p.add_argument("config")
    p.add_argument("out_dir")
    p.add_argument("--algo", choices=("toa", "asags", "both"), default="both")
    _add_anneal_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
