"""Multi-robot double coverage planning.

Complete-coverage exploration and crack servicing on a rectangular
workspace: crack chords and decomposition cells fuse into one Eulerian
multigraph, the Morse-bounded tour collection is enumerated, and the best
tour is split into balanced per-robot trajectories.
"""

from .allocation import EdgeCost, Partition, balanced_partition, edge_costs, select_best
from .baseline import greedy_plan
from .config import Params
from .cracks import CrackGraph, build_crack_graph
from .fusion import PlanningGraph, eulerian_lower_bound, match_and_augment
from .hierarchy import HierarchyError, build_hierarchy
from .mapgen import MapGenError, Workspace, WorkspaceMap, gen_map, map_density_pct
from .metrics import compute_metrics
from .io import load_map, load_plan, save_map, save_metrics, save_plan
from .planner import PlanResult, build_planning_graph, plan_map
from .reeb import Cell, ReebGraph, build_reeb, decompose, service_area_mask
from .render import render_svg
from .search import PlannerInfeasible, SearchResult, enumerate_tours, global_fallback_tour
from .trajectory import (
    ConflictReport,
    RobotPlan,
    TrajectoryError,
    TrajectorySegment,
    boustrophedon,
    generate,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Params", "Workspace", "WorkspaceMap", "gen_map", "map_density_pct", "MapGenError",
    "CrackGraph", "build_crack_graph", "Cell", "ReebGraph", "decompose",
    "service_area_mask", "build_reeb", "PlanningGraph", "match_and_augment",
    "eulerian_lower_bound", "build_hierarchy", "HierarchyError", "enumerate_tours",
    "global_fallback_tour", "SearchResult", "PlannerInfeasible", "EdgeCost",
    "edge_costs", "Partition", "balanced_partition", "select_best", "RobotPlan",
    "TrajectorySegment", "TrajectoryError", "boustrophedon", "generate", "validate",
    "ConflictReport", "greedy_plan", "compute_metrics", "plan_map", "PlanResult",
    "build_planning_graph", "render_svg", "save_map", "load_map", "save_plan",
    "load_plan", "save_metrics",
]
