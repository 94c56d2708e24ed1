"""Constructive greedy solver built on the tangent occupying action.

Items are placed one at a time at a position tangent to two already-placed
objects (packed items or the bin boundary), preferring positions closest to
the boundary. ``pack`` is the fixed-bin kernel reused by the annealer;
``construct`` solves a whole instance, opening bins on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernel, geometry
from .geometry import CircleGeom, Point
from .model import BinState, Instance, Item, Placement, Solution, compact

BIN = "BIN"  # sentinel for "tangent to the bin boundary" in Candidate.touching


@dataclass(frozen=True)
class Candidate:
    position: Point
    clearance: float
    touching: tuple[object, object]  # item ids, or the BIN sentinel


@dataclass(frozen=True)
class PackRequest:
    circle_ids: tuple[int, ...]
    bin_ids: tuple[int, ...]
    base: Solution

    def __post_init__(self):
        object.__setattr__(self, "circle_ids", tuple(self.circle_ids))
        object.__setattr__(self, "bin_ids", tuple(self.bin_ids))
        placed = set(self.base.placed_ids())
        overlap = placed.intersection(self.circle_ids)
        if overlap:
            raise ValueError(f"items already placed: {sorted(overlap)}")
        nbins = len(self.base.bins)
        for b in self.bin_ids:
            if not 0 <= b < nbins:
                raise ValueError(f"bin index {b} out of range")


def feasible_candidates(item: Item, bin_: BinState, instance: Instance) -> list[Candidate]:
    """All feasible tangent positions for ``item`` in one bin, with their
    boundary clearance and the pair of touched objects."""
    if item.radius > instance.bin_radius:
        raise ValueError("item larger than bin")
    tol = instance.tolerance()
    bin_circle = instance.bin_circle()
    packed = [
        CircleGeom(Point(p.x, p.y), instance.item(p.item_id).radius)
        for p in bin_.placements
    ]
    points = geometry.tangent_candidates(item.radius, packed, bin_circle, tol)
    out = []
    for p in points:
        clearance = geometry.boundary_clearance(p, item.radius, bin_circle)
        touching = _touched(p, item.radius, bin_, instance, tol.eps)
        out.append(Candidate(p, clearance, touching))
    return out


def _touched(p: Point, r: float, bin_: BinState, instance: Instance, eps: float):
    touched: list[object] = []
    R = instance.bin_radius
    if abs(math.hypot(p.x - R, p.y - R) + r - R) <= eps:
        touched.append(BIN)
    for q in bin_.placements:
        rq = instance.item(q.item_id).radius
        if abs(math.hypot(p.x - q.x, p.y - q.y) - (r + rq)) <= eps:
            touched.append(q.item_id)
    touched = touched[:2]
    while len(touched) < 2:
        touched.append(BIN)
    return tuple(touched)


def _solution_to_arrays(sol: Solution, cap: int):
    nbins = len(sol.bins)
    bins_x = np.zeros((nbins, cap))
    bins_y = np.zeros((nbins, cap))
    bins_r = np.zeros((nbins, cap))
    bins_id = np.zeros((nbins, cap), dtype=np.int64)
    counts = np.zeros(nbins, dtype=np.int64)
    inst = sol.instance
    for b, bin_ in enumerate(sol.bins):
        for m, p in enumerate(bin_.placements):
            bins_x[b, m] = p.x
            bins_y[b, m] = p.y
            bins_r[b, m] = inst.item(p.item_id).radius
            bins_id[b, m] = p.item_id
        counts[b] = len(bin_.placements)
    return bins_x, bins_y, bins_r, bins_id, counts


def _arrays_to_solution(inst, bins_x, bins_y, bins_id, counts) -> Solution:
    bins = []
    for b in range(counts.shape[0]):
        placements = tuple(
            Placement(int(bins_id[b, m]), float(bins_x[b, m]), float(bins_y[b, m]))
            for m in range(counts[b])
        )
        bins.append(BinState(placements))
    return Solution(inst, tuple(bins))


def sort_for_packing(ids: list[int], instance: Instance) -> list[int]:
    """Packing order: radius descending, ties by ascending id."""
    return sorted(ids, key=lambda i: (-instance.item(i).radius, i))


def pack(req: PackRequest) -> Solution | None:
    """Place the requested items into the listed bins, first-fit over bins,
    best (minimum-clearance) tangent position within a bin.

    Returns None when some item fits in none of the listed bins. Items are
    inserted in the order given by circle_ids.
    """
    inst = req.base.instance
    if not req.circle_ids:
        return req.base
    cap = inst.n
    bins_x, bins_y, bins_r, bins_id, counts = _solution_to_arrays(req.base, cap)
    order = list(req.circle_ids)
    item_rs = np.array([inst.item(i).radius for i in order])
    item_ids = np.array(order, dtype=np.int64)
    bin_order = np.array(req.bin_ids, dtype=np.int64)
    ok = _kernel.insert_items(
        item_rs, item_ids, bins_x, bins_y, bins_r, bins_id, counts,
        bin_order, inst.bin_radius, inst.tolerance().eps,
    )
    if not ok:
        return None
    return _arrays_to_solution(inst, bins_x, bins_y, bins_id, counts)


def construct(instance: Instance) -> Solution:
    """Greedy construction: items sorted radius-descending, packed into the
    open bins first-fit; a fresh bin is opened whenever no open bin admits
    the item. Deterministic (no randomness involved)."""
    order = sort_for_packing([it.id for it in instance.items], instance)
    n = instance.n
    R = instance.bin_radius
    eps = instance.tolerance().eps
    bins_x = np.zeros((n, n))
    bins_y = np.zeros((n, n))
    bins_r = np.zeros((n, n))
    bins_id = np.zeros((n, n), dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    opened = 0
    for item_id in order:
        r = instance.item(item_id).radius
        item_rs = np.array([r])
        item_ids = np.array([item_id], dtype=np.int64)
        placed = False
        if opened:
            placed = _kernel.insert_items(
                item_rs, item_ids, bins_x, bins_y, bins_r, bins_id, counts,
                np.arange(opened, dtype=np.int64), R, eps,
            )
        if not placed:
            opened += 1
            _kernel.insert_items(
                item_rs, item_ids, bins_x, bins_y, bins_r, bins_id, counts,
                np.array([opened - 1], dtype=np.int64), R, eps,
            )
    sol = _arrays_to_solution(
        instance, bins_x[:opened], bins_y[:opened], bins_id[:opened], counts[:opened]
    )
    return compact(sol)
