"""Problem/solution data model, feasibility validation, and objective metrics.

Convention: every bin is a circle of radius R centered at (R, R), so all
placement coordinates live in [0, 2R] x [0, 2R] regardless of which bin
they belong to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .geometry import CircleGeom, Point, Tolerance

FAMILIES = ("r_eq_i", "r_eq_sqrt_i", "custom")


@dataclass(frozen=True)
class Item:
    id: int
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"item {self.id}: radius must be positive")


@dataclass(frozen=True)
class Instance:
    name: str
    bin_radius: float
    items: tuple[Item, ...]
    family: str = "custom"
    n0: int | None = None
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        if not self.items:
            raise ValueError("instance has no items")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        ids = [it.id for it in self.items]
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise ValueError("item ids must be unique and contiguous from 1")
        for it in self.items:
            if it.radius > self.bin_radius:
                raise ValueError(
                    f"item {it.id} radius {it.radius} exceeds bin radius {self.bin_radius}"
                )
        object.__setattr__(self, "_by_id", {it.id: it for it in self.items})

    @property
    def n(self) -> int:
        return len(self.items)

    def item(self, item_id: int) -> Item:
        try:
            return self._by_id[item_id]
        except KeyError:
            raise KeyError(f"unknown item id {item_id}") from None

    def bin_center(self) -> Point:
        return Point(self.bin_radius, self.bin_radius)

    def bin_circle(self) -> CircleGeom:
        return CircleGeom(self.bin_center(), self.bin_radius)

    def tolerance(self) -> Tolerance:
        return Tolerance.for_bin_radius(self.bin_radius)


@dataclass(frozen=True)
class Placement:
    item_id: int
    x: float
    y: float


@dataclass(frozen=True)
class BinState:
    placements: tuple[Placement, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))
        ids = [p.item_id for p in self.placements]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate item in bin")

    def __len__(self) -> int:
        return len(self.placements)


@dataclass(frozen=True)
class Solution:
    instance: Instance
    bins: tuple[BinState, ...]

    def __post_init__(self):
        object.__setattr__(self, "bins", tuple(self.bins))

    def placed_ids(self) -> list[int]:
        return [p.item_id for b in self.bins for p in b.placements]


@dataclass(frozen=True)
class Metrics:
    k_used: int
    densities: tuple[float, ...]
    d_min: float
    d_max: float
    f_obj: float
    energy: float


@dataclass(frozen=True)
class Violation:
    kind: str  # "missing" | "duplicate" | "overlap" | "containment"
    item_ids: tuple[int, ...]
    magnitude: float = 0.0

    def __str__(self) -> str:
        ids = ",".join(str(i) for i in self.item_ids)
        return f"{self.kind}(items={ids}, magnitude={self.magnitude:.6g})"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.feasible:
            return "OK"
        return "\n".join(str(v) for v in self.violations)


def density(bin_: BinState, instance: Instance) -> float:
    """Fraction of the bin area covered by its items: sum(r_i^2) / R^2."""
    total = 0.0
    for p in bin_.placements:
        total += instance.item(p.item_id).radius ** 2
    return total / instance.bin_radius**2


def objective(sol: Solution) -> Metrics:
    """Objective metrics over used (non-empty) bins.

    F = -K + d_max - d_min; the annealer minimizes energy = -F.
    """
    densities = tuple(density(b, sol.instance) for b in sol.bins if len(b) > 0)
    if not densities:
        raise ValueError("empty solution")
    k = len(densities)
    d_min = min(densities)
    d_max = max(densities)
    f_obj = -k + d_max - d_min
    return Metrics(k, densities, d_min, d_max, f_obj, -f_obj)


def metrics_from_densities(densities: list[float]) -> Metrics:
    """Metrics for a given per-bin density list (e.g. a published table row)."""
    if not densities:
        raise ValueError("empty density list")
    k = len(densities)
    d_min = min(densities)
    d_max = max(densities)
    f_obj = -k + d_max - d_min
    return Metrics(k, tuple(densities), d_min, d_max, f_obj, -f_obj)


def validate(sol: Solution, tol: Tolerance | None = None) -> ValidationReport:
    """Full feasibility check. Reports every violation rather than failing
    fast: missing/duplicated items, pairwise overlaps within a bin, and
    containment breaches.
    """
    inst = sol.instance
    if tol is None:
        tol = inst.tolerance()
    report = ValidationReport()

    seen: dict[int, int] = {}
    for b in sol.bins:
        for p in b.placements:
            seen[p.item_id] = seen.get(p.item_id, 0) + 1
    for it in inst.items:
        count = seen.pop(it.id, 0)
        if count == 0:
            report.violations.append(Violation("missing", (it.id,)))
        elif count > 1:
            report.violations.append(Violation("duplicate", (it.id,), count))
    for item_id, count in seen.items():
        report.violations.append(Violation("unknown", (item_id,), count))
    known = {it.id for it in inst.items}

    R = inst.bin_radius
    cx = cy = R
    for b in sol.bins:
        ps = [p for p in b.placements if p.item_id in known]
        for i, p in enumerate(ps):
            r_i = inst.item(p.item_id).radius
            excess = math.hypot(p.x - cx, p.y - cy) + r_i - R
            if excess > tol.eps:
                report.violations.append(
                    Violation("containment", (p.item_id,), excess)
                )
            for q in ps[i + 1 :]:
                r_j = inst.item(q.item_id).radius
                gap = r_i + r_j - math.hypot(p.x - q.x, p.y - q.y)
                if gap > tol.eps:
                    report.violations.append(
                        Violation("overlap", (p.item_id, q.item_id), gap)
                    )
    return report


def compact(sol: Solution) -> Solution:
    """Drop empty bins, preserving bin order and all placements."""
    bins = tuple(b for b in sol.bins if len(b) > 0)
    if not bins:
        raise ValueError("empty solution")
    if len(bins) == len(sol.bins):
        return sol
    return replace(sol, bins=bins)
