"""Adaptive simulated annealing with greedy batch search.

Neighbors are produced by removing the items that intersect a random
region (a disc anchored on a packed item, or a sector of the bin) in two
randomly chosen bins, then reinserting them with the tangent-placement
kernel. A batch of up to ``t_greedy`` neighbors is generated per
temperature step: the first non-worsening neighbor is accepted
immediately, otherwise the best of the batch is accepted with the
adaptive Metropolis probability. The cooling coefficient and batch
length scale with the number of items.

Randomness comes from a single ``random.Random(seed)`` stream; all draws
happen in a fixed documented order (perturbation kind per batch, then per
selected bin either anchor-index and region radius, or sector start angle
and span), so runs are reproducible across platforms.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernel
from .geometry import CircleGeom, Point, SectorRegion
from .model import BinState, Instance, Placement, Solution
from .toa import _arrays_to_solution


@dataclass(frozen=True)
class AnnealParams:
    t_start: float = 0.1
    t_end: float = 1e-4
    n_iters: int = 2_000_000
    alpha: float = 0.9
    beta: float = 0.08
    delta_theta_fixed: float | None = None
    adaptive_span: bool = False
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.t_end < self.t_start:
            raise ValueError("need 0 < t_end < t_start")
        if self.n_iters <= 0 or self.alpha <= 0 or self.beta <= 0:
            raise ValueError("n_iters, alpha, beta must be positive")
        if self.delta_theta_fixed is not None and not 0 < self.delta_theta_fixed < 360:
            raise ValueError("delta_theta_fixed must be in (0, 360)")


@dataclass(frozen=True)
class DerivedSchedule:
    t_cool: float
    t_greedy: int


@dataclass
class RunStats:
    iterations_done: int = 0
    accepts_better: int = 0
    accepts_worse: int = 0
    rejects: int = 0
    reinsertion_failures: int = 0
    best_f: float = math.inf
    wall_time: float = 0.0
    f_trace: list[tuple[int, float, float, int]] = field(default_factory=list)


CIRCLE = "circle"
SECTOR = "sector"


def derive_schedule(params: AnnealParams, n: int) -> DerivedSchedule:
    """Size-adaptive schedule: batch length beta*n (round half up, >= 1)
    and cooling coefficient (alpha*sqrt(n) - 1) / (alpha*sqrt(n))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    t_greedy = max(1, math.floor(params.beta * n + 0.5))
    a = params.alpha * math.sqrt(n)
    t_cool = (a - 1.0) / a
    if t_cool <= 0.0:
        t_cool = 0.5
    return DerivedSchedule(t_cool, t_greedy)


def acceptance_probability(dE: float, t_current: float, n: int) -> float:
    """Probability of accepting a worsening move: exp(-dE/t * ln(n/2)),
    clamped to [0, 1]. For n <= 2 the log factor would be non-positive,
    so n is floored at 3."""
    if t_current <= 0:
        raise ValueError("t_current must be positive")
    scale = math.log(max(n, 3) / 2.0)
    p = math.exp(-dE / t_current * scale)
    return min(1.0, max(0.0, p))


def initial_solution(instance: Instance) -> Solution:
    """One bin per item, each item centered in its own bin."""
    R = instance.bin_radius
    bins = tuple(
        BinState((Placement(it.id, R, R),)) for it in instance.items
    )
    return Solution(instance, bins)


def sample_circle_region(bin_: BinState, R: float, rng: random.Random,
                         instance: Instance) -> CircleGeom:
    """Disc region centered on a uniformly chosen packed item, radius
    uniform in [0, R/2]. Always intersects its anchor item."""
    if len(bin_) == 0:
        raise ValueError("cannot sample a region in an empty bin")
    anchor = bin_.placements[rng.randrange(len(bin_))]
    radius = rng.uniform(0.0, R / 2.0)
    # CircleGeom forbids an exactly-zero radius; a denormal stand-in keeps
    # the (measure-zero) degenerate draw behaving as a point region.
    return CircleGeom(Point(anchor.x, anchor.y), max(radius, 5e-324))


def sample_sector(delta_theta: float | None, rng: random.Random,
                  bin_radius: float, origin: Point | None = None) -> SectorRegion:
    """Sector of the bin starting at a uniform integer angle; span is
    delta_theta when given, else a uniform integer in [20, 60]."""
    alpha = rng.randrange(360)
    span = delta_theta if delta_theta is not None else rng.randint(20, 60)
    if origin is None:
        origin = Point(bin_radius, bin_radius)
    return SectorRegion(origin, bin_radius, alpha, (alpha + span) % 360.0)


def removed_set(bin_: BinState, region, instance: Instance) -> set[int]:
    """Ids of items in the bin whose circle intersects the region."""
    from . import geometry

    out = set()
    for p in bin_.placements:
        c = CircleGeom(Point(p.x, p.y), instance.item(p.item_id).radius)
        if isinstance(region, SectorRegion):
            hit = geometry.circle_intersects_sector(c, region)
        else:
            hit = geometry.circle_intersects_circle_region(
                c, region.center, region.radius
            )
        if hit:
            out.add(p.item_id)
    return out


class _State:
    """Mutable array-backed packing state used by the annealing loop.

    Bin b holds ``counts[b]`` items in rows of the (K_alloc, cap) arrays.
    ``sumr2[b]`` caches the sum of squared radii per bin.
    """

    __slots__ = ("inst", "R", "eps", "cap", "K", "xs", "ys", "rs", "ids",
                 "counts", "sumr2", "_scr_x", "_scr_y", "_scr_r", "_scr_id",
                 "_scr_cnt", "_mask")

    def __init__(self, sol: Solution):
        inst = sol.instance
        self.inst = inst
        self.R = inst.bin_radius
        self.eps = inst.tolerance().eps
        n = inst.n
        self.cap = n
        self.K = len(sol.bins)
        alloc = max(self.K, n)
        self.xs = np.zeros((alloc, n))
        self.ys = np.zeros((alloc, n))
        self.rs = np.zeros((alloc, n))
        self.ids = np.zeros((alloc, n), dtype=np.int64)
        self.counts = np.zeros(alloc, dtype=np.int64)
        for b, bin_ in enumerate(sol.bins):
            for m, p in enumerate(bin_.placements):
                self.xs[b, m] = p.x
                self.ys[b, m] = p.y
                self.rs[b, m] = inst.item(p.item_id).radius
                self.ids[b, m] = p.item_id
            self.counts[b] = len(bin_.placements)
        self.sumr2 = np.zeros(alloc)
        for b in range(self.K):
            m = self.counts[b]
            self.sumr2[b] = float(np.dot(self.rs[b, :m], self.rs[b, :m]))
        # Scratch buffers for trial moves (at most two bins per move).
        self._scr_x = np.zeros((2, n))
        self._scr_y = np.zeros((2, n))
        self._scr_r = np.zeros((2, n))
        self._scr_id = np.zeros((2, n), dtype=np.int64)
        self._scr_cnt = np.zeros(2, dtype=np.int64)
        self._mask = np.zeros(n, dtype=np.bool_)

    def energy(self) -> float:
        dens = self.sumr2[: self.K] / (self.R * self.R)
        return self.K - float(dens.max()) + float(dens.min())

    def to_solution(self) -> Solution:
        return _arrays_to_solution(
            self.inst, self.xs[: self.K], self.ys[: self.K],
            self.ids[: self.K], self.counts[: self.K],
        )

    def snapshot(self):
        k = self.K
        return (
            self.xs[:k].copy(), self.ys[:k].copy(), self.ids[:k].copy(),
            self.counts[:k].copy(),
        )

    def solution_from_snapshot(self, snap) -> Solution:
        xs, ys, ids, counts = snap
        return _arrays_to_solution(self.inst, xs, ys, ids, counts)


class _Trial:
    __slots__ = ("sel", "xs", "ys", "rs", "ids", "counts", "f", "unchanged")

    def __init__(self, sel, xs, ys, rs, ids, counts, f, unchanged=False):
        self.sel = sel
        self.xs = xs
        self.ys = ys
        self.rs = rs
        self.ids = ids
        self.counts = counts
        self.f = f
        self.unchanged = unchanged

    def freeze(self) -> "_Trial":
        """Detach from the shared scratch buffers."""
        return _Trial(
            self.sel, self.xs.copy(), self.ys.copy(), self.rs.copy(),
            self.ids.copy(), self.counts.copy(), self.f, self.unchanged,
        )


def _try_neighbor(st: _State, rng: random.Random, kind: str,
                  span_fixed: float | None) -> _Trial | None:
    """Generate one trial move in scratch buffers. Returns None when the
    removed items could not all be reinserted into the selected bins."""
    K = st.K
    if K >= 2:
        sel = rng.sample(range(K), 2)
    else:
        sel = [0]
    R = st.R
    cx = cy = R

    removed_r_parts = []
    removed_id_parts = []
    for slot, b in enumerate(sel):
        m = int(st.counts[b])
        mask = st._mask
        if kind == CIRCLE:
            anchor = rng.randrange(m)
            pr = rng.uniform(0.0, R / 2.0)
            _kernel.mask_circle_region(
                st.xs[b], st.ys[b], st.rs[b], m,
                st.xs[b, anchor], st.ys[b, anchor], pr, mask,
            )
        else:
            alpha = float(rng.randrange(360))
            span = span_fixed if span_fixed is not None else float(rng.randint(20, 60))
            beta = (alpha + span) % 360.0
            _kernel.mask_sector_region(
                st.xs[b], st.ys[b], st.rs[b], m, cx, cy, R, alpha, beta, mask,
            )
        hit = mask[:m]
        keep = np.nonzero(~hit)[0]
        kept = keep.shape[0]
        st._scr_x[slot, :kept] = st.xs[b, keep]
        st._scr_y[slot, :kept] = st.ys[b, keep]
        st._scr_r[slot, :kept] = st.rs[b, keep]
        st._scr_id[slot, :kept] = st.ids[b, keep]
        st._scr_cnt[slot] = kept
        if kept < m:
            gone = np.nonzero(hit)[0]
            removed_r_parts.append(st.rs[b, gone])
            removed_id_parts.append(st.ids[b, gone])

    nsel = len(sel)
    if not removed_id_parts:
        return _Trial(tuple(sel), st._scr_x[:nsel], st._scr_y[:nsel],
                      st._scr_r[:nsel], st._scr_id[:nsel],
                      st._scr_cnt[:nsel], st.energy(), unchanged=True)

    # Reinsert radius-descending, ties by ascending id.
    rem_r = np.concatenate(removed_r_parts)
    rem_id = np.concatenate(removed_id_parts)
    order = np.lexsort((rem_id, -rem_r))
    item_rs = rem_r[order]
    item_ids = rem_id[order]
    ok = _kernel.insert_items(
        item_rs, item_ids, st._scr_x, st._scr_y, st._scr_r, st._scr_id,
        st._scr_cnt, np.arange(nsel, dtype=np.int64), R, st.eps,
    )
    if not ok:
        return None

    # Energy of the trial state: selected bins replaced, empties dropped.
    R2 = R * R
    k_used = 0
    d_min = math.inf
    d_max = -math.inf
    for b in range(K):
        if b in sel:
            slot = sel.index(b)
            cnt = int(st._scr_cnt[slot])
            if cnt == 0:
                continue
            s = float(np.dot(st._scr_r[slot, :cnt], st._scr_r[slot, :cnt]))
        else:
            cnt = int(st.counts[b])
            s = float(st.sumr2[b])
        k_used += 1
        d = s / R2
        if d < d_min:
            d_min = d
        if d > d_max:
            d_max = d
    f = k_used - d_max + d_min
    return _Trial(tuple(sel), st._scr_x[:nsel], st._scr_y[:nsel],
                  st._scr_r[:nsel], st._scr_id[:nsel], st._scr_cnt[:nsel], f)


def _commit(st: _State, trial: _Trial) -> None:
    if trial.unchanged:
        return
    for slot, b in enumerate(trial.sel):
        cnt = int(trial.counts[slot])
        st.xs[b, :cnt] = trial.xs[slot, :cnt]
        st.ys[b, :cnt] = trial.ys[slot, :cnt]
        st.rs[b, :cnt] = trial.rs[slot, :cnt]
        st.ids[b, :cnt] = trial.ids[slot, :cnt]
        st.counts[b] = cnt
        m = cnt
        st.sumr2[b] = float(np.dot(st.rs[b, :m], st.rs[b, :m]))
    # Compact empty bins, preserving order.
    w = 0
    for b in range(st.K):
        if st.counts[b] == 0:
            continue
        if w != b:
            st.xs[w] = st.xs[b]
            st.ys[w] = st.ys[b]
            st.rs[w] = st.rs[b]
            st.ids[w] = st.ids[b]
            st.counts[w] = st.counts[b]
            st.sumr2[w] = st.sumr2[b]
        w += 1
    st.K = w


def generate_neighbor(sol: Solution, kind: str, instance: Instance,
                      rng: random.Random) -> Solution | None:
    """One perturbation move on a full Solution. Returns None on
    reinsertion failure. ``kind`` is "circle" or "sector"."""
    if kind not in (CIRCLE, SECTOR):
        raise ValueError(f"unknown perturbation kind {kind!r}")
    st = _State(sol)
    trial = _try_neighbor(st, rng, kind, None)
    if trial is None:
        return None
    _commit(st, trial)
    return st.to_solution()


def run(instance: Instance, params: AnnealParams,
        trace_points: int = 512) -> tuple[Solution, RunStats]:
    """Full annealing run. Returns the best solution ever seen and the run
    statistics. Deterministic in (instance, params.seed)."""
    t0 = time.perf_counter()
    rng = random.Random(params.seed)
    n = instance.n
    sched = derive_schedule(params, n)
    st = _State(initial_solution(instance))
    f_cur = st.energy()
    best_snap = st.snapshot()
    stats = RunStats(best_f=f_cur)

    t_current = params.t_start
    gens = 0
    trace_every = max(1, params.n_iters // max(1, trace_points))
    next_trace = 0

    # Greedy batches: a non-worsening neighbor is accepted immediately and
    # resets the batch; only a full batch of t_greedy consecutive worse (or
    # failed) neighbors triggers the probabilistic acceptance of the batch
    # best and one cooling step. The full neighbor budget is always spent;
    # once the temperature floors at t_end the search is effectively greedy.
    worse_run = 0
    batch_best: _Trial | None = None
    while gens < params.n_iters:
        kind = CIRCLE if rng.random() < 0.5 else SECTOR
        if params.delta_theta_fixed is not None:
            span = params.delta_theta_fixed
        elif params.adaptive_span and kind == SECTOR:
            frac = (t_current - params.t_end) / (params.t_start - params.t_end)
            span = 20.0 + 40.0 * min(1.0, max(0.0, frac))
        else:
            span = None

        gens += 1
        trial = _try_neighbor(st, rng, kind, span)
        if trial is None:
            stats.reinsertion_failures += 1
            worse_run += 1
        elif trial.f <= f_cur:
            _commit(st, trial)
            f_cur = trial.f
            stats.accepts_better += 1
            worse_run = 0
            batch_best = None
            if f_cur < stats.best_f:
                stats.best_f = f_cur
                best_snap = st.snapshot()
        else:
            worse_run += 1
            if batch_best is None or trial.f < batch_best.f:
                batch_best = trial.freeze()

        if worse_run >= sched.t_greedy:
            if batch_best is not None:
                dE = batch_best.f - f_cur
                if rng.random() < acceptance_probability(dE, t_current, n):
                    _commit(st, batch_best)
                    f_cur = batch_best.f
                    stats.accepts_worse += 1
                else:
                    stats.rejects += 1
            # The temperature floors at t_end rather than ending the run:
            # the tail of the budget is spent in near-greedy descent.
            t_current = max(t_current * sched.t_cool, params.t_end)
            worse_run = 0
            batch_best = None

        if gens >= next_trace:
            stats.f_trace.append((gens, t_current, f_cur, st.K))
            next_trace = gens + trace_every

    stats.iterations_done = gens
    stats.wall_time = time.perf_counter() - t0
    return st.solution_from_snapshot(best_snap), stats
