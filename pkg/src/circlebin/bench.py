"""Benchmark generation and the experiment harness.

Two instance families (item radii i and sqrt(i) for i = 1..n0), each in a
fixed flavor (exactly five copies per radius) and a random flavor (a
uniform random copy count per radius). Bin radii either come from a
user-supplied table keyed by n0, or from the area heuristic
R = ceil(sqrt(sum r_i^2 / 0.55)) which sizes bins for roughly 55% packing
density per bin.
"""

from __future__ import annotations

import math
import random
import time
import zlib
from dataclasses import dataclass, replace

from . import asags, toa
from .model import Instance, Item, objective, validate
from .stats import PAIRED_ONE_TAILED, PAIRED_TWO_TAILED, TTestResult, paired_t_test

__all__ = [
    "BenchConfig", "ExperimentRow", "TTestResult",
    "generate_instance", "instance_rng", "heuristic_bin_radius",
    "run_experiment", "paired_t_test", "emit_tables", "parse_table_csv",
    "experiment_t_test", "PAIRED_TWO_TAILED", "PAIRED_ONE_TAILED",
]

FIXED_COPIES = 5


@dataclass(frozen=True)
class BenchConfig:
    family: str  # "r_eq_i" | "r_eq_sqrt_i"
    mode: str  # "fixed" | "random"
    n0_range: tuple[int, int] = (8, 20)  # inclusive
    bin_radius_table: dict[int, float] | None = None  # None -> heuristic
    seed: int = 0
    copies_range: tuple[int, int] = (2, 10)

    def __post_init__(self):
        if self.family not in ("r_eq_i", "r_eq_sqrt_i"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.mode not in ("fixed", "random"):
            raise ValueError(f"unknown mode {self.mode!r}")
        lo, hi = self.n0_range
        if lo > hi or lo < 1:
            raise ValueError("bad n0_range")
        if self.copies_range[0] < 1 or self.copies_range[0] > self.copies_range[1]:
            raise ValueError("bad copies_range")
        if self.bin_radius_table is not None:
            for n0 in self.n0_values():
                if n0 not in self.bin_radius_table:
                    raise ValueError(f"bin_radius_table missing entry for n0={n0}")

    def n0_values(self) -> range:
        return range(self.n0_range[0], self.n0_range[1] + 1)


@dataclass(frozen=True)
class ExperimentRow:
    n0: int
    n: int
    algorithm: str  # "TOA" | "ASAGS"
    densities: tuple[float, ...]
    F: float
    runtime: float


def _radius(family: str, i: int) -> float:
    return float(i) if family == "r_eq_i" else math.sqrt(i)


def heuristic_bin_radius(radii: list[float], target_density: float = 0.55) -> float:
    """Bin radius sized so one copy of each distinct radius fills roughly
    ``target_density`` of the (ceil-rounded) bin area. Replicated copies
    then spill over into a handful of bins."""
    return float(math.ceil(math.sqrt(sum(r * r for r in radii) / target_density)))


def instance_rng(cfg: BenchConfig, n0: int) -> random.Random:
    """Deterministic per-instance RNG derived from the config seed."""
    key = f"{cfg.family}|{cfg.mode}|{n0}|{cfg.seed}"
    return random.Random(zlib.crc32(key.encode()))


def generate_instance(cfg: BenchConfig, n0: int, rng: random.Random) -> Instance:
    """One benchmark instance: radii f(1)..f(n0), each replicated 5 times
    (fixed mode) or a uniform random number of times (random mode)."""
    if n0 not in cfg.n0_values():
        raise ValueError(f"n0={n0} outside configured range {cfg.n0_range}")
    base = [_radius(cfg.family, i) for i in range(1, n0 + 1)]
    radii: list[float] = []
    for r in base:
        copies = (
            FIXED_COPIES
            if cfg.mode == "fixed"
            else rng.randint(cfg.copies_range[0], cfg.copies_range[1])
        )
        radii.extend([r] * copies)
    if cfg.bin_radius_table is not None:
        R = cfg.bin_radius_table[n0]
    else:
        # Sized from the base radius set so R depends only on (family, n0),
        # never on the random copy counts.
        R = heuristic_bin_radius(base)
    items = tuple(Item(i + 1, r) for i, r in enumerate(radii))
    return Instance(
        name=f"{cfg.family}_{cfg.mode}_n0{n0}",
        bin_radius=R,
        items=items,
        family=cfg.family,
        n0=n0,
        seed=cfg.seed,
    )


def _solver_seed(base_seed: int, name: str) -> int:
    return zlib.crc32(f"{name}|{base_seed}".encode())


def run_experiment(cfg: BenchConfig, params: asags.AnnealParams,
                   algorithms: tuple[str, ...] = ("TOA", "ASAGS"),
                   solutions: dict | None = None,
                   stats_out: dict | None = None) -> list[ExperimentRow]:
    """Run the configured instances through TOA and/or ASA-GS.

    Both solvers are timed (solver call only) and their outputs validated;
    a validation failure is a solver bug and aborts. ``solutions`` and
    ``stats_out``, when given, collect the layouts and the annealer run
    statistics keyed by (instance name, algorithm).
    """
    rows: list[ExperimentRow] = []
    for n0 in cfg.n0_values():
        inst = generate_instance(cfg, n0, instance_rng(cfg, n0))
        for alg in algorithms:
            t0 = time.perf_counter()
            if alg == "TOA":
                sol = toa.construct(inst)
            elif alg == "ASAGS":
                seed = _solver_seed(params.seed, inst.name)
                sol, run_stats = asags.run(inst, replace(params, seed=seed))
                if stats_out is not None:
                    stats_out[(inst.name, alg)] = run_stats
            else:
                raise ValueError(f"unknown algorithm {alg!r}")
            elapsed = time.perf_counter() - t0
            report = validate(sol)
            if not report.feasible:
                raise RuntimeError(
                    f"{alg} produced an infeasible solution on {inst.name}:\n{report}"
                )
            m = objective(sol)
            rows.append(
                ExperimentRow(
                    n0=n0,
                    n=inst.n,
                    algorithm=alg,
                    densities=tuple(sorted(m.densities, reverse=True)),
                    F=m.f_obj,
                    runtime=elapsed,
                )
            )
            if solutions is not None:
                solutions[(inst.name, alg)] = sol
    return rows


def experiment_t_test(rows: list[ExperimentRow],
                      variant: str = PAIRED_TWO_TAILED) -> TTestResult:
    """Paired t-test on the F columns (ASA-GS vs TOA, paired by n0)."""
    toa_f = {r.n0: r.F for r in rows if r.algorithm == "TOA"}
    asa_f = {r.n0: r.F for r in rows if r.algorithm == "ASAGS"}
    common = sorted(set(toa_f) & set(asa_f))
    return paired_t_test([toa_f[k] for k in common], [asa_f[k] for k in common],
                         variant)


def _table_cells(rows: list[ExperimentRow],
                 include_runtime: bool = True) -> tuple[list[str], list[list[str]]]:
    max_bins = max((len(r.densities) for r in rows), default=0)
    header = ["n0", "n", "alg"] + [f"bin{i + 1}" for i in range(max_bins)] + ["F"]
    if include_runtime:
        header.append("t")
    lines = []
    for r in rows:
        dens = [f"{d:.2f}" for d in r.densities]
        dens += [""] * (max_bins - len(dens))
        cells = [str(r.n0), str(r.n), r.algorithm, *dens, f"{r.F:.2f}"]
        if include_runtime:
            cells.append(f"{r.runtime:.3f}")
        lines.append(cells)
    return header, lines


def emit_tables(rows: list[ExperimentRow], format: str = "csv",
                include_runtime: bool = True) -> str:
    """Results table: one line per (instance, algorithm), densities sorted
    descending, 2-decimal densities and F, runtimes in seconds.

    ``include_runtime=False`` drops the wall-time column so the table is a
    pure function of (instances, params, seeds) and reruns are byte-stable.
    """
    header, lines = _table_cells(rows, include_runtime)
    if format == "csv":
        return "\n".join([",".join(header)] + [",".join(l) for l in lines]) + "\n"
    if format == "markdown":
        out = ["| " + " | ".join(header) + " |",
               "|" + "|".join("---" for _ in header) + "|"]
        out += ["| " + " | ".join(l) + " |" for l in lines]
        return "\n".join(out) + "\n"
    raise ValueError(f"unknown format {format!r}")


def parse_table_csv(text: str) -> list[ExperimentRow]:
    """Inverse of emit_tables(format="csv") at the emitted precision."""
    lines = [l for l in text.strip().splitlines() if l]
    header = lines[0].split(",")
    n_bins = sum(1 for h in header if h.startswith("bin"))
    has_runtime = header[-1] == "t"
    rows = []
    for line in lines[1:]:
        cells = line.split(",")
        dens = tuple(float(c) for c in cells[3 : 3 + n_bins] if c != "")
        rows.append(
            ExperimentRow(
                n0=int(cells[0]),
                n=int(cells[1]),
                algorithm=cells[2],
                densities=dens,
                F=float(cells[3 + n_bins]),
                runtime=float(cells[4 + n_bins]) if has_runtime else 0.0,
            )
        )
    return rows
