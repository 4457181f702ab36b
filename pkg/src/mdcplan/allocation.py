"""Tour weighting, balanced contiguous partition, and tour selection.

Each planning-graph edge gets a (length, time) cost: Reeb edges use the lane
length of their cell's boustrophedon sweep at exploration speed, crack edges
their chord length at service speed (plus any transit stub at exploration
speed), connectors their straight length at exploration speed. A tour is
split into N contiguous subpaths minimizing the maximum subpath time, and
the best tour minimizes total length plus alpha times that maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import Params
from .fusion import CRACK, REEB, PlanningGraph
from .geometry import polyline_length
from .trajectory import boustrophedon


@dataclass(frozen=True)
class EdgeCost:
    length_m: float
    time_s: float


def edge_costs(pg: PlanningGraph, params: Params) -> list[EdgeCost]:
    """Per-edge traversal cost under the single-cell sweep model."""
    out = []
    for e in pg.edges:
        if e.label == REEB:
            cell = pg.cells[e.cell_ref]
            sweep = boustrophedon([cell], params.sensor_radius, pg.vertices[e.u].position)
            lane_len = polyline_length(sweep)
            out.append(EdgeCost(lane_len, lane_len / params.explore_speed))
        elif e.label == CRACK:
            service = e.service_geometry if e.service_geometry is not None else e.geometry
            s_len = polyline_length(service)
            stub = max(e.length - s_len, 0.0)
            out.append(EdgeCost(e.length, s_len / params.service_speed + stub / params.explore_speed))
        else:
            out.append(EdgeCost(e.length, e.length / params.explore_speed))
    return out


@dataclass
class Partition:
    """Contiguous split of a tour's edge sequence into per-robot subpaths."""

    cuts: list[int]  # len n_robots + 1; subpath i covers edges[cuts[i]:cuts[i+1]]
    costs: list[float]  # per-robot summed cost

    @property
    def max_cost(self) -> float:
        return max(self.costs) if self.costs else 0.0

    @property
    def n_robots(self) -> int:
        return len(self.costs)

    def slices(self) -> list[tuple[int, int]]:
        return [(self.cuts[i], self.cuts[i + 1]) for i in range(len(self.costs))]


def _chunks_needed(values: list[float], bound: float) -> int:
    """Greedy left-to-right packing under `bound`; inf when impossible."""
    needed, acc = 1, 0.0
    for v in values:
        if v > bound:
            return len(values) + 1
        if acc + v > bound:
            needed += 1
            acc = v
        else:
            acc += v
    return needed


def _subarray_sums(values: list[float]) -> list[float]:
    """All contiguous-run sums, accumulated left to right like the greedy."""
    sums = set()
    for i in range(len(values)):
        acc = 0.0
        for j in range(i, len(values)):
            acc += values[j]
            sums.add(acc)
    return sorted(sums)


def balanced_partition(
    values, n_robots: int, cut_bonus: list[float] | None = None
) -> Partition:
    """Min-max contiguous partition via binary search plus greedy packing.

    `values` are per-edge scalar costs along the tour. The optimal bound is
    always some contiguous-run sum, so for moderate tour lengths the search
    bisects that candidate set directly, making the result exact rather than
    converged-to-ulp; very long tours fall back to a float bisection.

    Many partitions hit the optimal bound; `cut_bonus[i]` (a reward for
    cutting just before element i) picks among them, e.g. to place cuts at
    large spatial jumps that a single robot would otherwise have to drive.
    The minimal max-cost is never traded away for bonus.
    """
    values = [float(v) for v in values]
    if n_robots < 1:
        raise ValueError("n_robots must be at least 1")
    if n_robots > len(values):
        raise ValueError(f"cannot split {len(values)} edges among {n_robots} robots")
    if any(v < 0 for v in values):
        raise ValueError("edge costs must be nonnegative")
    if len(values) <= 600:
        cand = _subarray_sums(values)
        lo_i, hi_i = 0, len(cand) - 1
        while lo_i < hi_i:
            mid = (lo_i + hi_i) // 2
            if _chunks_needed(values, cand[mid]) <= n_robots:
                hi_i = mid
            else:
                lo_i = mid + 1
        bound = cand[hi_i]
    else:
        lo, hi = max(values), sum(values)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _chunks_needed(values, mid) <= n_robots:
                hi = mid
            else:
                lo = mid
        bound = hi
    if cut_bonus is not None:
        cuts = _bonus_cuts(values, n_robots, bound, cut_bonus)
    else:
        cuts = [0]
        acc = 0.0
        for i, v in enumerate(values):
            if acc + v > bound:
                cuts.append(i)
                acc = v
            else:
                acc += v
        cuts.append(len(values))
        # Greedy may use fewer chunks than robots; split the widest chunks
        # until every robot has a nonempty subpath (splitting never raises
        # the max).
        while len(cuts) - 1 < n_robots:
            widths = [cuts[i + 1] - cuts[i] for i in range(len(cuts) - 1)]
            k = max(range(len(widths)), key=lambda i: widths[i])
            if widths[k] < 2:
                raise AssertionError("cannot split further; n_robots check should prevent this")
            cuts.insert(k + 1, cuts[k] + widths[k] // 2)
    costs = [float(sum(values[cuts[i]:cuts[i + 1]], 0.0)) for i in range(len(cuts) - 1)]
    return Partition(cuts, costs)


def _bonus_cuts(
    values: list[float], n_robots: int, bound: float, cut_bonus: list[float]
) -> list[int]:
    """Cuts achieving `bound` with maximum total bonus at the cut points.

    Dynamic program over (elements consumed, chunks used); every chunk must
    be nonempty with sum at most `bound` (a hair of float slack, since the
    bound itself came from summing the same values in one fixed order).
    """
    m = len(values)
    slack = 1e-9 * max(1.0, bound)
    neg = float("-inf")
    score = [[neg] * (n_robots + 1) for _ in range(m + 1)]
    prev = [[-1] * (n_robots + 1) for _ in range(m + 1)]
    score[0][0] = 0.0
    for i in range(1, m + 1):
        acc = 0.0
        j = i - 1
        while j >= 0:
            acc += values[j]
            if acc > bound + slack:
                break
            for k in range(1, n_robots + 1):
                base = score[j][k - 1]
                if base == neg:
                    continue
                cand = base + (cut_bonus[j] if 0 < j < len(cut_bonus) else 0.0)
                if cand > score[i][k]:
                    score[i][k] = cand
                    prev[i][k] = j
            j -= 1
    if score[m][n_robots] == neg:
        raise AssertionError("bonus DP found no partition at the optimal bound")
    cuts = [m]
    k = n_robots
    while cuts[-1] > 0:
        j = prev[cuts[-1]][k]
        cuts.append(j)
        k -= 1
    return cuts[::-1]


def rank_tours(tours, costs: list[EdgeCost], n_robots: int, alpha: float = 1.0):
    """Sort tours by total length + alpha * max subpath time, ascending.

    Returns a list of (tour, Partition, objective) triples. Ties break
    toward the lexicographically smaller edge-id sequence. When a tour has
    fewer edges than robots, the extra robots idle and the partition covers
    the edges.
    """
    if not tours:
        raise ValueError("no tours to select from")
    ranked = []
    for t in tours:
        times = [costs[eid].time_s for eid in t.edge_ids]
        part = balanced_partition(times, min(n_robots, len(times)))
        total_len = math.fsum(costs[eid].length_m for eid in t.edge_ids)
        obj = total_len + alpha * part.max_cost
        ranked.append(((obj, tuple(t.edge_ids)), t, part, obj))
    ranked.sort(key=lambda r: r[0])
    return [(t, part, obj) for _, t, part, obj in ranked]


def select_best(tours, costs: list[EdgeCost], n_robots: int, alpha: float = 1.0):
    """Pick the tour minimizing total length + alpha * max subpath time."""
    return rank_tours(tours, costs, n_robots, alpha=alpha)[0]
