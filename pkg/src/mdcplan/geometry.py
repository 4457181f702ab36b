"""Planar primitives: polylines, raster masks, dilation, intersections.

All polylines are float64 arrays of shape (n, 2) in workspace meters. Raster
masks discretize the workspace rectangle [0, l] x [0, w] into square cells of
a given resolution; a cell is addressed by (ix, iy) with its center at
((ix + 0.5) * res, (iy + 0.5) * res).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_polyline(points) -> np.ndarray:
    """Validate and convert `points` to an (n, 2) float array, n >= 2."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError(f"polyline needs shape (n>=2, 2), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError("polyline has non-finite coordinates")
    return arr


def polyline_length(poly) -> float:
    p = np.asarray(poly, dtype=float)
    return float(np.sum(np.hypot(*(p[1:] - p[:-1]).T)))


def sample_polyline(poly, step: float) -> np.ndarray:
    """Points along `poly` at arc-length spacing <= step, endpoints included."""
    p = as_polyline(poly)
    seg = np.hypot(*(p[1:] - p[:-1]).T)
    total = float(seg.sum())
    if total == 0.0:
        return p[:1]
    n = max(1, int(np.ceil(total / step)))
    s = np.linspace(0.0, total, n + 1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    idx = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg) - 1)
    denom = np.where(seg[idx] > 0, seg[idx], 1.0)
    t = (s - cum[idx]) / denom
    return p[idx] + (p[idx + 1] - p[idx]) * t[:, None]


def point_segment_distance(points: np.ndarray, a, b) -> np.ndarray:
    """Distance from each row of `points` to segment ab (vectorized)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a = np.asarray(a, dtype=float)
    d = np.asarray(b, dtype=float) - a
    den = float(d @ d)
    if den == 0.0:
        return np.hypot(*(pts - a).T)
    t = np.clip(((pts - a) @ d) / den, 0.0, 1.0)
    proj = a + t[:, None] * d
    return np.hypot(*(pts - proj).T)


def distance_to_polyline(points: np.ndarray, poly) -> np.ndarray:
    """Min distance from each point to any segment of `poly`."""
    p = as_polyline(poly)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    best = np.full(len(pts), np.inf)
    for i in range(len(p) - 1):
        np.minimum(best, point_segment_distance(pts, p[i], p[i + 1]), out=best)
    return best


@dataclass
class RasterMask:
    """Boolean occupancy grid over the workspace rectangle."""

    resolution: float
    grid: np.ndarray  # bool, shape (nx, ny)

    @classmethod
    def empty(cls, length_m: float, width_m: float, resolution: float) -> "RasterMask":
        nx = int(np.ceil(length_m / resolution))
        ny = int(np.ceil(width_m / resolution))
        return cls(resolution, np.zeros((nx, ny), dtype=bool))

    @classmethod
    def full(cls, length_m: float, width_m: float, resolution: float) -> "RasterMask":
        m = cls.empty(length_m, width_m, resolution)
        m.grid[:] = True
        return m

    def copy(self) -> "RasterMask":
        return RasterMask(self.resolution, self.grid.copy())

    def union(self, other: "RasterMask") -> "RasterMask":
        return RasterMask(self.resolution, self.grid | other.grid)

    def intersect(self, other: "RasterMask") -> "RasterMask":
        return RasterMask(self.resolution, self.grid & other.grid)

    def xs(self) -> np.ndarray:
        return (np.arange(self.grid.shape[0]) + 0.5) * self.resolution

    def ys(self) -> np.ndarray:
        return (np.arange(self.grid.shape[1]) + 0.5) * self.resolution


def mask_area(mask: RasterMask) -> float:
    """Lebesgue-measure estimate: true-cell count times cell area."""
    return float(mask.grid.sum()) * mask.resolution**2


def dilate(
    poly,
    radius: float,
    resolution: float,
    length_m: float,
    width_m: float,
    out: RasterMask | None = None,
) -> RasterMask:
    """Raster Minkowski sum of a polyline with a disk of `radius`.

    A cell is set iff its center lies within `radius` of the polyline. The
    result is clipped to the workspace grid. Pass `out` to OR into an
    existing mask (resolution must match).
    """
    if radius <= 0 or resolution <= 0:
        raise ValueError("radius and resolution must be positive")
    p = as_polyline(poly)
    if out is None:
        out = RasterMask.empty(length_m, width_m, resolution)
    grid = out.grid
    nx, ny = grid.shape
    res = resolution
    for i in range(len(p) - 1):
        a, b = p[i], p[i + 1]
        lo = np.minimum(a, b) - radius
        hi = np.maximum(a, b) + radius
        i0 = max(0, int(np.floor(lo[0] / res - 0.5)))
        i1 = min(nx, int(np.ceil(hi[0] / res + 0.5)))
        j0 = max(0, int(np.floor(lo[1] / res - 0.5)))
        j1 = min(ny, int(np.ceil(hi[1] / res + 0.5)))
        if i0 >= i1 or j0 >= j1:
            continue
        cx = (np.arange(i0, i1) + 0.5) * res
        cy = (np.arange(j0, j1) + 0.5) * res
        gx, gy = np.meshgrid(cx, cy, indexing="ij")
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        d = point_segment_distance(pts, a, b).reshape(i1 - i0, j1 - j0)
        grid[i0:i1, j0:j1] |= d <= radius
    return out


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segment_crossings(p1, p2, q1, q2, eps: float = 1e-12) -> list[tuple[float, float]]:
    """Intersection points of two closed segments.

    Transversal crossings give one point; collinear overlaps report the
    overlap run's endpoints.
    """
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    scale = max(
        abs(p1[0] - p2[0]) + abs(p1[1] - p2[1]),
        abs(q1[0] - q2[0]) + abs(q1[1] - q2[1]),
        1.0,
    )
    tol = eps * scale * scale
    if abs(d1) <= tol and abs(d2) <= tol and abs(d3) <= tol and abs(d4) <= tol:
        # Collinear: project onto the dominant axis and intersect ranges.
        axis = 0 if abs(p2[0] - p1[0]) >= abs(p2[1] - p1[1]) else 1
        lo = max(min(p1[axis], p2[axis]), min(q1[axis], q2[axis]))
        hi = min(max(p1[axis], p2[axis]), max(q1[axis], q2[axis]))
        if lo > hi + tol:
            return []
        pts = []
        for v in ([lo, hi] if hi - lo > tol else [lo]):
            t = 0.0 if p2[axis] == p1[axis] else (v - p1[axis]) / (p2[axis] - p1[axis])
            pts.append((p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1])))
        return pts
    if ((d1 > tol) == (d2 > tol) and not (abs(d1) <= tol or abs(d2) <= tol)) or (
        (d3 > tol) == (d4 > tol) and not (abs(d3) <= tol or abs(d4) <= tol)
    ):
        return []
    den = (p2[0] - p1[0]) * (q2[1] - q1[1]) - (p2[1] - p1[1]) * (q2[0] - q1[0])
    if abs(den) <= tol:
        return []
    t = ((q1[0] - p1[0]) * (q2[1] - q1[1]) - (q1[1] - p1[1]) * (q2[0] - q1[0])) / den
    if t < -eps or t > 1 + eps:
        return []
    u = ((q1[0] - p1[0]) * (p2[1] - p1[1]) - (q1[1] - p1[1]) * (p2[0] - p1[0])) / den
    if u < -eps or u > 1 + eps:
        return []
    return [(p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))]


def polyline_intersections(
    a,
    b,
    exclusion_centers=(),
    exclusion_radius: float = 0.0,
    dedupe_tol: float = 1e-6,
) -> list[tuple[float, float]]:
    """Crossing points between polylines `a` and `b`, minus exclusion balls.

    Points within `exclusion_radius` of any exclusion center are dropped.
    Collinear overlap runs contribute their endpoints. Result is sorted by
    (x, y) and deduplicated within `dedupe_tol`.
    """
    pa = as_polyline(a)
    pb = as_polyline(b)
    centers = np.asarray(list(exclusion_centers), dtype=float).reshape(-1, 2)
    # Vectorized bounding-box prefilter; only surviving segment pairs get the
    # exact crossing test.
    a_lo, a_hi = np.minimum(pa[:-1], pa[1:]), np.maximum(pa[:-1], pa[1:])
    b_lo, b_hi = np.minimum(pb[:-1], pb[1:]), np.maximum(pb[:-1], pb[1:])
    near = (
        (a_lo[:, None, :] <= b_hi[None, :, :] + 1e-9)
        & (b_lo[None, :, :] <= a_hi[:, None, :] + 1e-9)
    ).all(axis=2)
    raw: list[tuple[float, float]] = []
    for i, j in np.argwhere(near):
        raw.extend(_segment_crossings(pa[i], pa[i + 1], pb[j], pb[j + 1]))
    kept: list[tuple[float, float]] = []
    for pt in sorted(raw):
        if centers.size:
            d = np.hypot(centers[:, 0] - pt[0], centers[:, 1] - pt[1])
            if (d <= exclusion_radius).any():
                continue
        if kept and abs(kept[-1][0] - pt[0]) <= dedupe_tol and abs(kept[-1][1] - pt[1]) <= dedupe_tol:
            continue
        kept.append(pt)
    return kept
