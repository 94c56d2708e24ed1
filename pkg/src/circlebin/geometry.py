"""Planar circle geometry: tangency candidates, overlap/containment
predicates, and region-intersection tests for perturbation shapes.

All functions are pure and operate on immutable values, so they are safe
to call concurrently. Coordinates are plain floats; tolerances are explicit
via :class:`Tolerance`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")


@dataclass(frozen=True)
class CircleGeom:
    center: Point
    radius: float

    def __post_init__(self):
        if not math.isfinite(self.radius) or self.radius <= 0:
            raise ValueError(f"radius must be positive and finite, got {self.radius}")


@dataclass(frozen=True)
class SectorRegion:
    """A circular sector anchored at ``origin``, spanning counter-clockwise
    from ``alpha_deg`` to ``beta_deg`` (wrap-around allowed when beta < alpha).
    """

    origin: Point
    outer_radius: float
    alpha_deg: float
    beta_deg: float

    def __post_init__(self):
        if self.outer_radius <= 0:
            raise ValueError("outer_radius must be positive")
        object.__setattr__(self, "alpha_deg", self.alpha_deg % 360.0)
        object.__setattr__(self, "beta_deg", self.beta_deg % 360.0)


@dataclass(frozen=True)
class Tolerance:
    eps: float

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @classmethod
    def for_bin_radius(cls, bin_radius: float) -> "Tolerance":
        # 1e-9 scaled by the bin radius keeps tangency chains stable
        # across instance scales without admitting visible overlap.
        return cls(1e-9 * max(1.0, bin_radius))


def _dist(ax: float, ay: float, bx: float, by: float) -> float:
    return math.hypot(ax - bx, ay - by)


def circle_circle_intersection(
    c1: CircleGeom, c2: CircleGeom, tol: Tolerance | None = None
) -> list[Point]:
    """Intersection points of two circle boundaries.

    Returns 0, 1 (tangent within eps), or 2 points. Concentric or disjoint
    circles yield an empty list.
    """
    eps = tol.eps if tol is not None else 1e-9 * max(1.0, c1.radius, c2.radius)
    return [
        Point(x, y)
        for x, y in _circle_circle_points(
            c1.center.x, c1.center.y, c1.radius,
            c2.center.x, c2.center.y, c2.radius, eps,
        )
    ]


def _circle_circle_points(
    x1: float, y1: float, r1: float, x2: float, y2: float, r2: float, eps: float
) -> list[tuple[float, float]]:
    """Tuple-returning core of circle_circle_intersection.

    Accepts zero radii (a degenerate circle is a single boundary point),
    which arises when an item exactly fills the bin.
    """
    d = _dist(x1, y1, x2, y2)
    if d <= eps:
        # Concentric (including coincident): no well-defined finite point set.
        return []
    if d > r1 + r2 + eps or d < abs(r1 - r2) - eps:
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
    h_sq = r1 * r1 - a * a
    ux = (x2 - x1) / d
    uy = (y2 - y1) / d
    mx = x1 + a * ux
    my = y1 + a * uy
    # Tangent (internally or externally): collapse to the single point.
    if abs(d - (r1 + r2)) <= eps or abs(d - abs(r1 - r2)) <= eps or h_sq <= 0.0:
        return [(mx, my)]
    h = math.sqrt(h_sq)
    return [(mx + h * uy, my - h * ux), (mx - h * uy, my + h * ux)]


def contains(bin_: CircleGeom, item: CircleGeom, tol: Tolerance) -> bool:
    """True iff the item circle lies entirely inside the bin (tangency ok)."""
    d = _dist(item.center.x, item.center.y, bin_.center.x, bin_.center.y)
    return d + item.radius <= bin_.radius + tol.eps


def overlaps(a: CircleGeom, b: CircleGeom, tol: Tolerance) -> bool:
    """True iff the two circles overlap with positive area. Tangency does
    not count as overlap."""
    d = _dist(a.center.x, a.center.y, b.center.x, b.center.y)
    return d < a.radius + b.radius - tol.eps


def boundary_clearance(p: Point, r: float, bin_: CircleGeom) -> float:
    """Distance from the boundary of an item (p, r) to the bin boundary.

    Negative for positions that poke outside the bin.
    """
    return bin_.radius - _dist(p.x, p.y, bin_.center.x, bin_.center.y) - r


def tangent_candidates(
    r: float,
    packed: list[CircleGeom],
    bin_: CircleGeom,
    tol: Tolerance | None = None,
) -> list[Point]:
    """Feasible center positions for a new circle of radius ``r`` that are
    tangent to at least two distinct objects among the packed items and the
    bin boundary.

    An empty bin yields the single bootstrap position tangent to the
    boundary at polar angle 0.
    """
    R = bin_.radius
    if r > R:
        raise ValueError(f"item larger than bin: r={r} > R={R}")
    if tol is None:
        tol = Tolerance.for_bin_radius(R)
    cx, cy = bin_.center.x, bin_.center.y

    if not packed:
        return [Point(cx + R - r, cy)]

    # Inflate packed items by r; deflate the bin by r. Candidate centers are
    # intersections of these loci, taken pairwise.
    loci: list[tuple[float, float, float]] = [
        (c.center.x, c.center.y, c.radius + r) for c in packed
    ]
    if R - r >= 0.0:
        loci.append((cx, cy, R - r))

    raw: list[tuple[float, float]] = []
    for i in range(len(loci)):
        xi, yi, ri = loci[i]
        for j in range(i + 1, len(loci)):
            xj, yj, rj = loci[j]
            raw.extend(_circle_circle_points(xi, yi, ri, xj, yj, rj, tol.eps))

    out: list[Point] = []
    for px, py in raw:
        if _dist(px, py, cx, cy) + r > R + tol.eps:
            continue
        ok = True
        for c in packed:
            if _dist(px, py, c.center.x, c.center.y) < c.radius + r - tol.eps:
                ok = False
                break
        if ok:
            out.append(Point(px, py))
    return out


def _norm_deg(angle: float) -> float:
    return angle % 360.0


def _angle_in_arc(theta: float, alpha: float, beta: float) -> bool:
    """Is angle theta (degrees, normalized) on the CCW arc alpha -> beta?"""
    theta = _norm_deg(theta)
    alpha = _norm_deg(alpha)
    beta = _norm_deg(beta)
    if alpha <= beta:
        return alpha <= theta <= beta
    return theta >= alpha or theta <= beta


def point_in_sector(p: Point, s: SectorRegion) -> bool:
    dx = p.x - s.origin.x
    dy = p.y - s.origin.y
    d = math.hypot(dx, dy)
    if d > s.outer_radius:
        return False
    if d == 0.0:
        return True
    theta = math.degrees(math.atan2(dy, dx)) % 360.0
    return _angle_in_arc(theta, s.alpha_deg, s.beta_deg)


def circle_intersects_segment(c: CircleGeom, seg_start: Point, seg_end: Point) -> bool:
    """True iff the circle touches the closed segment (min distance <= radius)."""
    ax, ay = seg_start.x, seg_start.y
    bx, by = seg_end.x, seg_end.y
    vx, vy = bx - ax, by - ay
    seg_len_sq = vx * vx + vy * vy
    if seg_len_sq == 0.0:
        raise ValueError("degenerate segment")
    t = ((c.center.x - ax) * vx + (c.center.y - ay) * vy) / seg_len_sq
    t = min(1.0, max(0.0, t))
    return _dist(c.center.x, c.center.y, ax + t * vx, ay + t * vy) <= c.radius


def circle_intersects_sector(c: CircleGeom, s: SectorRegion) -> bool:
    """A circle meets the sector iff its center lies inside it, or it crosses
    one of the two bounding radius segments. The outer arc needs no separate
    test when all circles of interest lie inside the sector's disc.
    """
    if point_in_sector(c.center, s):
        return True
    for ang in (s.alpha_deg, s.beta_deg):
        rad = math.radians(ang)
        end = Point(
            s.origin.x + s.outer_radius * math.cos(rad),
            s.origin.y + s.outer_radius * math.sin(rad),
        )
        if circle_intersects_segment(c, s.origin, end):
            return True
    return False


def circle_intersects_circle_region(c: CircleGeom, region_center: Point,
                                    region_radius: float) -> bool:
    """True iff the circle meets a closed disc region (tangency counts).

    The region radius may be zero (a point region).
    """
    if region_radius < 0:
        raise ValueError("region radius must be non-negative")
    d = _dist(c.center.x, c.center.y, region_center.x, region_center.y)
    return d <= c.radius + region_radius
