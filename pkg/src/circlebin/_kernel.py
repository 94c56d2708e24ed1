"""Numba-compiled hot loops for tangent placement and perturbation moves.

These kernels mirror the semantics of :mod:`circlebin.geometry` (same
tolerance rules, same tie-breaking) on flat float64 arrays so that the
annealer can afford millions of reinsertion moves. The pure-Python geometry
functions remain the reference; the test suite cross-checks the two.

Array conventions: a bin holds parallel arrays xs, ys, rs, ids with the
first ``m`` entries valid. All bins are centered at (R, R).
"""

from __future__ import annotations

import numpy as np
from numba import njit

BIN_SENTINEL = -1  # "touching the bin boundary" marker in candidate reporting


@njit(cache=True)
def best_position(r, xs, ys, rs, m, cx, cy, R, eps):
    """Best tangent position for a circle of radius r in one bin.

    Returns (found, x, y, clearance). The best position minimizes boundary
    clearance R - |p - center| - r; ties within eps break lexicographically
    on (x, y). An empty bin yields the bootstrap position on the boundary
    at polar angle 0.
    """
    if r > R:
        return False, 0.0, 0.0, 0.0
    if m == 0:
        return True, cx + (R - r), cy, 0.0

    found = False
    best_x = 0.0
    best_y = 0.0
    best_c = 0.0

    # Loci whose pairwise intersections are the tangency candidates:
    # packed items inflated by r (indices 0..m-1) and the bin deflated
    # to R - r (index m).
    n_loci = m + 1
    for i in range(n_loci - 1):
        if i < m:
            xi = xs[i]
            yi = ys[i]
            ri = rs[i] + r
        else:
            xi = cx
            yi = cy
            ri = R - r
        for j in range(i + 1, n_loci):
            if j < m:
                xj = xs[j]
                yj = ys[j]
                rj = rs[j] + r
            else:
                xj = cx
                yj = cy
                rj = R - r

            dx = xj - xi
            dy = yj - yi
            d = np.sqrt(dx * dx + dy * dy)
            if d <= eps:
                continue
            if d > ri + rj + eps or d < abs(ri - rj) - eps:
                continue
            a = (ri * ri - rj * rj + d * d) / (2.0 * d)
            h_sq = ri * ri - a * a
            ux = dx / d
            uy = dy / d
            mx = xi + a * ux
            my = yi + a * uy
            if (
                abs(d - (ri + rj)) <= eps
                or abs(d - abs(ri - rj)) <= eps
                or h_sq <= 0.0
            ):
                n_pts = 1
                p0x = mx
                p0y = my
                p1x = 0.0
                p1y = 0.0
            else:
                h = np.sqrt(h_sq)
                n_pts = 2
                p0x = mx + h * uy
                p0y = my - h * ux
                p1x = mx - h * uy
                p1y = my + h * ux

            for k in range(n_pts):
                px = p0x if k == 0 else p1x
                py = p0y if k == 0 else p1y
                ddx = px - cx
                ddy = py - cy
                dist_c = np.sqrt(ddx * ddx + ddy * ddy)
                if dist_c + r > R + eps:
                    continue
                clear = R - dist_c - r
                # Prune against the incumbent before the O(m) overlap scan.
                if found and clear > best_c + eps:
                    continue
                ok = True
                for q in range(m):
                    qx = px - xs[q]
                    qy = py - ys[q]
                    lim = rs[q] + r - eps
                    if qx * qx + qy * qy < lim * lim:
                        ok = False
                        break
                if not ok:
                    continue
                if not found:
                    take = True
                elif clear < best_c - eps:
                    take = True
                elif abs(clear - best_c) <= eps:
                    take = px < best_x or (px == best_x and py < best_y)
                else:
                    take = False
                if take:
                    found = True
                    best_x = px
                    best_y = py
                    best_c = clear
    return found, best_x, best_y, best_c


@njit(cache=True)
def insert_items(item_rs, item_ids, bins_x, bins_y, bins_r, bins_id, counts,
                 bin_order, R, eps):
    """First-fit tangent insertion of items (in the given order) into the
    bins listed in bin_order. Mutates the bin arrays in place.

    Returns True if every item was placed, False on the first item that fits
    in none of the listed bins (arrays are then partially mutated; callers
    work on scratch copies).
    """
    cx = R
    cy = R
    for t in range(item_rs.shape[0]):
        r = item_rs[t]
        placed = False
        for bi in range(bin_order.shape[0]):
            b = bin_order[bi]
            m = counts[b]
            found, px, py, _ = best_position(
                r, bins_x[b], bins_y[b], bins_r[b], m, cx, cy, R, eps
            )
            if found:
                bins_x[b, m] = px
                bins_y[b, m] = py
                bins_r[b, m] = r
                bins_id[b, m] = item_ids[t]
                counts[b] = m + 1
                placed = True
                break
        if not placed:
            return False
    return True


@njit(cache=True)
def mask_circle_region(xs, ys, rs, m, px, py, pr, out):
    """Mark items whose circle meets the closed disc (px, py, pr)."""
    for i in range(m):
        dx = xs[i] - px
        dy = ys[i] - py
        lim = rs[i] + pr
        out[i] = dx * dx + dy * dy <= lim * lim


@njit(cache=True)
def _angle_in_arc(theta, alpha, beta):
    if alpha <= beta:
        return alpha <= theta <= beta
    return theta >= alpha or theta <= beta


@njit(cache=True)
def _seg_hit(px, py, r, ax, ay, bx, by):
    vx = bx - ax
    vy = by - ay
    seg = vx * vx + vy * vy
    t = ((px - ax) * vx + (py - ay) * vy) / seg
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    dx = px - (ax + t * vx)
    dy = py - (ay + t * vy)
    return dx * dx + dy * dy <= r * r


@njit(cache=True)
def mask_sector_region(xs, ys, rs, m, cx, cy, R, alpha_deg, beta_deg, out):
    """Mark items meeting the sector (alpha -> beta CCW, wrap-aware) anchored
    at the bin center: center-in-sector, or crossing a bounding radius.
    """
    ar = alpha_deg * np.pi / 180.0
    br = beta_deg * np.pi / 180.0
    a_ex = cx + R * np.cos(ar)
    a_ey = cy + R * np.sin(ar)
    b_ex = cx + R * np.cos(br)
    b_ey = cy + R * np.sin(br)
    for i in range(m):
        dx = xs[i] - cx
        dy = ys[i] - cy
        d = np.sqrt(dx * dx + dy * dy)
        hit = False
        if d <= R:
            if d == 0.0:
                hit = True
            else:
                theta = np.arctan2(dy, dx) * 180.0 / np.pi
                if theta < 0.0:
                    theta += 360.0
                hit = _angle_in_arc(theta, alpha_deg, beta_deg)
        if not hit:
            hit = _seg_hit(xs[i], ys[i], rs[i], cx, cy, a_ex, a_ey) or _seg_hit(
                xs[i], ys[i], rs[i], cx, cy, b_ex, b_ey
            )
        out[i] = hit
