"""Synthetic crack map generation.

Cracks are bounded random walks dropped into the workspace until the
dilated-footprint density metric hits the requested level. Density counts
each crack's sensing footprint separately (overlap double-counts), which is
what makes dense categories genuinely harder rather than saturating.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import Params
from .geometry import dilate, mask_area

_MARGIN = 0.3  # keep walk vertices this far inside the workspace


@dataclass(frozen=True)
class Workspace:
    length_m: float
    width_m: float

    @property
    def area_m2(self) -> float:
        return self.length_m * self.width_m


@dataclass
class WorkspaceMap:
    workspace: Workspace
    cracks: list[np.ndarray]
    meta: dict = field(default_factory=dict)


class MapGenError(Exception):
    """The requested density could not be reached."""


def _walk(rng: np.random.Generator, ws: Workspace, distribution: str) -> np.ndarray | None:
    """One bounded random walk, 3-12 vertices, segment lengths 0.3-1.5 m."""
    lo = np.array([_MARGIN, _MARGIN])
    hi = np.array([ws.length_m - _MARGIN, ws.width_m - _MARGIN])
    if distribution == "uniform":
        start = rng.uniform(lo, hi)
        heading = rng.uniform(0.0, 2.0 * np.pi)
    else:
        center = 0.5 * (lo + hi)
        sigma = np.array([ws.length_m, ws.width_m]) / 6.0
        start = np.clip(rng.normal(center, sigma), lo, hi)
        heading = rng.normal(0.0, np.pi / 3.0)
    n_vertices = int(rng.integers(3, 13))
    pts = [start]
    while len(pts) < n_vertices:
        placed = False
        for _ in range(8):  # re-aim if the step would leave the workspace
            step = rng.uniform(0.3, 1.5)
            cand = pts[-1] + step * np.array([np.cos(heading), np.sin(heading)])
            if np.all(cand >= lo) and np.all(cand <= hi):
                pts.append(cand)
                heading += rng.uniform(-0.7, 0.7)
                placed = True
                break
            heading += rng.uniform(np.pi / 2.0, 3.0 * np.pi / 2.0)
        if not placed:
            break
    if len(pts) < 3:
        return None
    return np.round(np.asarray(pts, dtype=float), 6)


def crack_density_pct(cracks, ws: Workspace, r: float, resolution: float) -> float:
    """Sum of per-crack dilated footprints over the workspace area, percent."""
    total = 0.0
    for crack in cracks:
        m = dilate(crack, r, resolution, ws.length_m, ws.width_m)
        total += mask_area(m)
    return 100.0 * total / ws.area_m2


def map_density_pct(wmap: WorkspaceMap, params: Params | None = None) -> float:
    p = params or Params()
    return crack_density_pct(wmap.cracks, wmap.workspace, p.sensor_radius, p.resolution)


def gen_map(
    distribution: str,
    density_pct: float,
    seed: int,
    workspace: Workspace | None = None,
    params: Params | None = None,
) -> WorkspaceMap:
    """Deterministically generate a crack map at the requested density +-5.

    Candidate walks that would overshoot the band are rejected; after 1e4
    candidate placements the generator gives up with the achieved density.
    """
    if distribution not in ("uniform", "gaussian"):
        raise ValueError(f"unknown distribution {distribution!r}")
    if not 10.0 <= density_pct <= 120.0:
        raise ValueError(f"density_pct must be in [10, 120], got {density_pct}")
    p = params or Params()
    ws = workspace or Workspace(p.length_m, p.width_m)
    rng = np.random.default_rng(seed)
    cracks: list[np.ndarray] = []
    density = 0.0
    attempts = 0
    while density < density_pct - 2.0:
        if attempts >= 10_000:
            raise MapGenError(
                f"density {density_pct} unreachable after {attempts} placements "
                f"(achieved {density:.1f})"
            )
        attempts += 1
        crack = _walk(rng, ws, distribution)
        if crack is None:
            continue
        gain = crack_density_pct([crack], ws, p.sensor_radius, p.resolution)
        if density + gain > density_pct + 5.0:
            continue
        cracks.append(crack)
        density += gain
    return WorkspaceMap(
        workspace=ws,
        cracks=cracks,
        meta={
            "seed": int(seed),
            "distribution": distribution,
            "density_pct": float(density_pct),
        },
    )
