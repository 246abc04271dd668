"""Oracle-only graph reconstruction: vertices first, then edges."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..graph import ImmersedGraph
from ..persistence import Oracle, OracleStats
from ..geometry import EPS
from .arcs import EdgeArc, SearchObserver, arc_edge_count, indegree, split_arc, split_direction
from .edges import find_edges, find_up_edges, upward_orders
from .vertices import reconstruct_vertices


@dataclass
class ReconstructionResult:
    graph: ImmersedGraph
    stats: OracleStats
    phase_timings: dict = field(default_factory=dict)


def reconstruct_graph(
    oracle: Oracle, d: int, eps: float = EPS, observer: SearchObserver | None = None
) -> ReconstructionResult:
    """Rebuild the hidden graph from diagrams alone."""
    t0 = time.perf_counter()
    V = reconstruct_vertices(oracle, d, eps)
    t1 = time.perf_counter()
    E = find_edges(V, oracle, eps, observer)
    t2 = time.perf_counter()
    return ReconstructionResult(
        ImmersedGraph(V, E),
        oracle.stats.snapshot(),
        {"vertices": t1 - t0, "edges": t2 - t1},
    )


__all__ = [
    "EdgeArc",
    "ReconstructionResult",
    "SearchObserver",
    "arc_edge_count",
    "find_edges",
    "find_up_edges",
    "indegree",
    "reconstruct_graph",
    "reconstruct_vertices",
    "split_arc",
    "split_direction",
    "upward_orders",
]
