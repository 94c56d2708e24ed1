"""Deterministic SVG rendering of packing layouts.

Bins are drawn left to right in density-descending order, each as a
stroked circle at a fixed pixel scale, items color-coded by radius, with
the bin density printed beneath. Output bytes depend only on the solution.
"""

from __future__ import annotations

import hashlib

from .model import Solution, density

BIN_PX = 280.0  # rendered bin diameter in pixels
MARGIN = 20.0
LABEL_H = 30.0


def _radius_color(r: float) -> str:
    """Stable per-radius fill color: hash the radius repr into a hue."""
    h = hashlib.md5(repr(r).encode()).digest()
    hue = int.from_bytes(h[:2], "big") % 360
    return f"hsl({hue},65%,60%)"


def render_svg(sol: Solution) -> str:
    inst = sol.instance
    R = inst.bin_radius
    scale = BIN_PX / (2.0 * R)

    order = sorted(range(len(sol.bins)),
                   key=lambda b: (-density(sol.bins[b], inst), b))
    k = len(order)
    width = MARGIN + k * (BIN_PX + MARGIN)
    height = 2 * MARGIN + BIN_PX + LABEL_H

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
    ]
    for slot, b in enumerate(order):
        ox = MARGIN + slot * (BIN_PX + MARGIN)
        # Bin circle; placements are in bin-local coordinates with the bin
        # center at (R, R), so pixel position is just placement * scale.
        bcx = ox + BIN_PX / 2.0
        bcy = MARGIN + BIN_PX / 2.0
        parts.append(
            f'<circle cx="{bcx:.3f}" cy="{bcy:.3f}" r="{BIN_PX / 2.0:.3f}" '
            'fill="none" stroke="black" stroke-width="1.5"/>'
        )
        for p in sol.bins[b].placements:
            r = inst.item(p.item_id).radius
            px = ox + p.x * scale
            py = MARGIN + (2.0 * R - p.y) * scale  # flip y: SVG y grows down
            parts.append(
                f'<circle cx="{px:.3f}" cy="{py:.3f}" r="{r * scale:.3f}" '
                f'fill="{_radius_color(r)}" stroke="#333" stroke-width="0.5"/>'
            )
        d = density(sol.bins[b], inst)
        parts.append(
            f'<text x="{bcx:.3f}" y="{MARGIN + BIN_PX + 20.0:.3f}" '
            'font-family="monospace" font-size="14" text-anchor="middle">'
            f"d={d:.3f}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
