import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcplan.fusion import CONNECTOR, PGEdge, PGVertex, PlanningGraph
from mdcplan.hierarchy import (
    _adjacency,
    assign_levels,
    basis_violations,
    build_hierarchy,
    find_bridges,
    fundamental_basis,
    split_bridges_cycles,
)
from oracles import brute_bridges, cycle_space_dim


def mk_graph(edges, n_vertices=None, positions=None):
    n = n_vertices or (max(max(u, v) for u, v in edges) + 1)
    pg = PlanningGraph()
    for i in range(n):
        pos = positions[i] if positions else (float(i), float(i % 3))
        pg.vertices[i] = PGVertex(i, np.asarray(pos, float), "critical")
    for k, (u, v) in enumerate(edges):
        geom = np.asarray([pg.vertices[u].position, pg.vertices[v].position])
        ln = float(np.hypot(*(geom[1] - geom[0])))
        pg.edges.append(PGEdge(k, u, v, CONNECTOR, geom, ln))
    pg.start, pg.end = 0, n - 1
    return pg


def test_find_bridges_on_theta_with_tail():
    # theta graph (no bridges) plus a pendant edge (one bridge)
    edges = [(0, 1), (1, 2), (2, 0), (0, 2), (2, 3)]
    pg = mk_graph(edges)
    got = find_bridges(_adjacency(pg))
    assert got == {4}


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)),
                min_size=1, max_size=12))
def test_find_bridges_matches_bruteforce(edges):
    edges = [(u, v) for u, v in edges if u != v]
    if not edges:
        return
    pg = mk_graph(edges)
    got = find_bridges(_adjacency(pg))
    assert got == brute_bridges(edges)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)),
                min_size=1, max_size=12))
def test_fundamental_basis_dimension(edges):
    edges = [(u, v) for u, v in edges if u != v]
    if not edges:
        return
    pg = mk_graph(edges)
    basis = fundamental_basis(pg)
    assert len(basis) == cycle_space_dim(edges)
    seen = set()
    for cyc in basis:
        assert cyc not in seen  # distinct member sets
        seen.add(cyc)


def test_split_bridges_cycles_two_triangles_and_a_bridge():
    edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]
    pg = mk_graph(edges)
    bridges, dim = split_bridges_cycles(pg)
    assert bridges == {3}
    assert dim == cycle_space_dim(edges) == 2


def test_basis_violations_empty_without_reeb_cells():
    # connector edges carry no cell refs, so cell containment cannot trigger
    edges = [(0, 1), (1, 2), (2, 0), (1, 3), (3, 2)]
    pg = mk_graph(edges)
    basis = fundamental_basis(pg)
    assert basis_violations(pg, basis) == []


def test_assign_levels_demotes_nested_interval():
    # outer 4-cycle spanning g in [0, 10]; a parallel copy of its middle edge
    # makes an inner 2-cycle spanning [4, 6], edge-adjacent to the outer one
    positions = [(0, 5), (4, 5), (6, 5), (10, 5)]
    edges = [(0, 1), (1, 2), (2, 3), (0, 3), (1, 2)]
    pg = mk_graph(edges, positions=positions)
    basis = fundamental_basis(pg)
    assert len(basis) == 2
    spans = [
        (
            min(pg.vertices[v].g for e in c for v in (pg.edges[e].u, pg.edges[e].v)),
            max(pg.vertices[v].g for e in c for v in (pg.edges[e].u, pg.edges[e].v)),
        )
        for c in basis
    ]
    outer = min(range(2), key=lambda i: spans[i][0])
    inner = 1 - outer
    assert spans[inner][0] > spans[outer][0] and spans[inner][1] < spans[outer][1]
    levels = assign_levels(pg, basis)
    assert levels[outer] == 0
    assert levels[inner] == 1


def test_build_hierarchy_smoke_on_real_map():
    from mdcplan.config import Params
    from mdcplan.mapgen import gen_map
    from mdcplan.planner import build_planning_graph

    wm = gen_map("uniform", 40, 7)
    pg = build_planning_graph(wm, Params())
    hier = build_hierarchy(pg)
    assert hier.level0_order
    covered = set()
    for comp in hier.components:
        covered.update(comp.edge_ids)
    assert covered == set(range(len(pg.edges)))
    for comp in hier.components:
        if comp.segments:
            seg_edges = set()
            for seg in comp.segments:
                seg_edges.update(seg.edge_ids)
            assert seg_edges == set(comp.edge_ids)
