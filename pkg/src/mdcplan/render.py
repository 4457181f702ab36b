"""Static SVG rendering of a map and its robot trajectories.

Cracks draw bold black under the trajectories; each robot gets one color
with explore/service solid and transit dashed; start points draw as stars,
end points as crosses. Y flips so the figure reads in workspace coordinates.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .mapgen import WorkspaceMap
from .trajectory import SERVICE, TRANSIT, RobotPlan

_COLORS = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
           "#a65628", "#f781bf", "#17becf"]


def _path(poly: np.ndarray, h: float) -> str:
    return " ".join(
        f"{'M' if i == 0 else 'L'} {x:.3f} {h - y:.3f}"
        for i, (x, y) in enumerate(np.asarray(poly, dtype=float))
    )


def _star(cx: float, cy: float, size: float, color: str) -> str:
    pts = []
    for k in range(10):
        rad = size if k % 2 == 0 else 0.4 * size
        ang = -math.pi / 2 + k * math.pi / 5
        pts.append(f"{cx + rad * math.cos(ang):.3f},{cy + rad * math.sin(ang):.3f}")
    return f'<polygon points="{" ".join(pts)}" fill="{color}" stroke="black" stroke-width="0.03"/>'


def _cross(cx: float, cy: float, size: float, color: str) -> str:
    s = size
    return (
        f'<path d="M {cx - s:.3f} {cy - s:.3f} L {cx + s:.3f} {cy + s:.3f} '
        f'M {cx - s:.3f} {cy + s:.3f} L {cx + s:.3f} {cy - s:.3f}" '
        f'stroke="{color}" stroke-width="{0.5 * s:.3f}" fill="none"/>'
    )


def render_svg(wmap: WorkspaceMap, plans: list[RobotPlan], path) -> None:
    l, w = wmap.workspace.length_m, wmap.workspace.width_m
    margin = 1.0
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{-margin} {-margin} {l + 2 * margin} {w + 2 * margin}" '
        f'width="{int(30 * (l + 2 * margin))}" height="{int(30 * (w + 2 * margin))}">',
        f'<rect x="0" y="0" width="{l}" height="{w}" fill="white" '
        'stroke="black" stroke-width="0.1"/>',
    ]
    for crack in wmap.cracks:
        parts.append(
            f'<path d="{_path(crack, w)}" stroke="black" stroke-width="0.18" '
            'fill="none" stroke-linecap="round"/>'
        )
    for plan in plans:
        color = _COLORS[plan.robot_id % len(_COLORS)]
        for seg in plan.segments:
            width = 0.12 if seg.mode == SERVICE else 0.06
            dash = ' stroke-dasharray="0.25 0.2"' if seg.mode == TRANSIT else ""
            parts.append(
                f'<path d="{_path(seg.polyline, w)}" stroke="{color}" '
                f'stroke-width="{width}" fill="none" opacity="0.85"{dash}/>'
            )
    for plan in plans:
        color = _COLORS[plan.robot_id % len(_COLORS)]
        if plan.start is not None:
            parts.append(_star(float(plan.start[0]), w - float(plan.start[1]), 0.45, color))
        if plan.end is not None:
            parts.append(_cross(float(plan.end[0]), w - float(plan.end[1]), 0.35, color))
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
