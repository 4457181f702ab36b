import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcplan.allocation import balanced_partition, edge_costs, rank_tours, select_best
from mdcplan.config import Params
from mdcplan.fusion import CRACK, REEB
from mdcplan.search import Tour
from oracles import minmax_partition


def test_partition_known_vector():
    part = balanced_partition([1, 2, 3, 4, 5], 2)
    assert part.max_cost == pytest.approx(9.0)
    assert part.cuts[0] == 0 and part.cuts[-1] == 5
    assert part.slices() == [(0, 3), (3, 5)]


def test_partition_single_robot_and_full_split():
    vals = [3.0, 1.0, 4.0, 1.0, 5.0]
    assert balanced_partition(vals, 1).max_cost == pytest.approx(sum(vals))
    full = balanced_partition(vals, len(vals))
    assert full.max_cost == pytest.approx(max(vals))
    assert all(hi - lo == 1 for lo, hi in full.slices())


def test_partition_rejects_bad_inputs():
    with pytest.raises(ValueError):
        balanced_partition([1.0, 2.0], 3)
    with pytest.raises(ValueError):
        balanced_partition([1.0, -2.0], 1)
    with pytest.raises(ValueError):
        balanced_partition([1.0], 0)


def test_partition_matches_dp_oracle_random_vectors():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(1, 200)
        vals = [rng.uniform(0.0, 10.0) for _ in range(n)]
        k = rng.randint(1, min(8, n))
        part = balanced_partition(vals, k)
        assert len(part.costs) == k
        assert part.max_cost == pytest.approx(minmax_partition(vals, k), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0.0, 100.0), min_size=1, max_size=40),
    st.integers(1, 6),
)
def test_partition_optimal_property(vals, k):
    if k > len(vals):
        k = len(vals)
    part = balanced_partition(vals, k)
    assert part.max_cost == pytest.approx(minmax_partition(vals, k), abs=1e-6)
    # contiguous cover of the whole vector
    assert part.cuts[0] == 0 and part.cuts[-1] == len(vals)
    assert all(b > a for a, b in part.slices())


def test_cut_bonus_prefers_marked_cuts_without_losing_optimality():
    vals = [2.0, 2.0, 2.0, 2.0]
    # both (2,2) splits are optimal; the bonus picks where the cut lands
    for marked in (1, 2, 3):
        bonus = [0.0] * 4
        bonus[marked] = 5.0
        part = balanced_partition(vals, 2, cut_bonus=bonus)
        want = minmax_partition(vals, 2)
        assert part.max_cost <= want + 1e-9
        if marked == 2:  # only the middle cut keeps the optimal max
            assert part.cuts == [0, 2, 4]


def test_cut_bonus_never_trades_away_the_bound():
    rng = random.Random(21)
    for _ in range(50):
        n = rng.randint(2, 60)
        vals = [rng.uniform(0.1, 5.0) for _ in range(n)]
        k = rng.randint(1, min(6, n))
        bonus = [rng.uniform(0.0, 3.0) for _ in range(n)]
        plain = balanced_partition(vals, k)
        bonused = balanced_partition(vals, k, cut_bonus=bonus)
        assert bonused.max_cost <= plain.max_cost + 1e-6
        assert len(bonused.costs) == k


def _graph_with_costs():
    from mdcplan.mapgen import gen_map
    from mdcplan.planner import build_planning_graph

    p = Params()
    pg = build_planning_graph(gen_map("uniform", 35, 4), p)
    return pg, edge_costs(pg, p), p


def test_edge_costs_modes():
    pg, costs, p = _graph_with_costs()
    assert len(costs) == len(pg.edges)
    for e, c in zip(pg.edges, costs):
        assert c.length_m > 0 and c.time_s > 0
        if e.label == CRACK:
            # service speed is slower than exploration, so time exceeds
            # the pure drive time over the same length
            assert c.time_s >= c.length_m / p.explore_speed - 1e-9
        elif e.label == REEB:
            # sweeping a cell covers more ground than the edge geometry
            assert c.time_s == pytest.approx(c.length_m / p.explore_speed)


def test_rank_tours_orders_by_objective_and_breaks_ties():
    costs = [
        type("C", (), {"length_m": 1.0, "time_s": 1.0})(),
        type("C", (), {"length_m": 2.0, "time_s": 2.0})(),
        type("C", (), {"length_m": 3.0, "time_s": 3.0})(),
    ]
    a = Tour([0, 1, 2], [0, 1, 2, 3])
    b = Tour([2, 1, 0], [3, 2, 1, 0])
    ranked = rank_tours([b, a], costs, 2, alpha=1.0)
    # equal objective, lexicographically smaller edge ids first
    assert [t.edge_ids for t, _, _ in ranked] == [[0, 1, 2], [2, 1, 0]]
    assert ranked[0][2] == pytest.approx(6.0 + 3.0)
    best_tour, part, obj = select_best([a, b], costs, 2)
    assert best_tour.edge_ids == [0, 1, 2]
    assert part.n_robots == 2


def test_rank_tours_handles_more_robots_than_edges():
    costs = [type("C", (), {"length_m": 4.0, "time_s": 4.0})()]
    t = Tour([0], [0, 1])
    _, part, obj = rank_tours([t], costs, 5)[0]
    assert part.n_robots == 1
    assert obj == pytest.approx(8.0)
