"""Edge-arc search state and the arc splitting step."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InconsistentSplit, NegativeCount
from ..geometry import angle_of, embed_planar, height
from ..persistence import AugmentedDiagram, Oracle


@dataclass(frozen=True)
class EdgeArc:
    """Wedge of the upper half-plane around ``center`` with its candidate vertices.

    ``verts`` is the slice ``order[lo:hi]`` of the center's clockwise-sorted
    array of vertices above it; slicing never copies.
    """

    center: int
    alpha1: float
    alpha2: float
    order: np.ndarray
    lo: int
    hi: int
    edge_count: int

    @property
    def verts(self) -> np.ndarray:
        return self.order[self.lo:self.hi]

    @property
    def size(self) -> int:
        return self.hi - self.lo


class SearchObserver:
    """No-op hooks called by the edge search; subclass to instrument a run."""

    def on_vertex(self, v: int, known_edges: set) -> None:
        pass

    def on_iteration(self, v: int, stack: Sequence[EdgeArc], found: Sequence[tuple]) -> None:
        pass

    def on_arc(self, arc: EdgeArc) -> None:
        pass

    def on_split(self, parent: EdgeArc, left: EdgeArc, right: EdgeArc, queries: int) -> None:
        pass


def indegree(D: AugmentedDiagram, v, s) -> int:
    """Edges at ``v`` whose filter value in direction ``s`` equals ``s . v``."""
    return D.edges_at(height(np.asarray(v, dtype=float), np.asarray(s, dtype=float)))


def arc_edge_count(arc: EdgeArc, D: AugmentedDiagram, E_star: Sequence, points: np.ndarray) -> int:
    """Edges inside ``arc``: the indegree in ``D.direction`` minus known edges outside it."""
    count = indegree(D, points[arc.center], D.direction) - len(E_star)
    if count < 0:
        raise NegativeCount(f"arc at {arc.center}: indegree smaller than {len(E_star)} known edges")
    return count


def split_direction(alpha: float, d: int) -> np.ndarray:
    """Unit vector of R^d, in the (e1, e2)-plane, a quarter turn clockwise of ``alpha``."""
    return embed_planar(math.cos(alpha - math.pi / 2), math.sin(alpha - math.pi / 2), d)


def split_arc(
    arc: EdgeArc,
    bigedges: Sequence[tuple[int, int]],
    theta: float,
    oracle: Oracle,
    points: np.ndarray,
    observer: SearchObserver | None = None,
) -> tuple[EdgeArc, EdgeArc]:
    """Halve ``arc`` with one oracle query.

    ``bigedges`` are the known edges ``(center, other)`` outside the arc.  The
    left half takes the first ``ceil(k/2)`` vertices; its edge count is the
    indegree along the splitting direction minus the known edges that fall
    below the center along that direction.
    """
    k = arc.size
    if k < 2 or not 0 < arc.edge_count < k:
        raise InconsistentSplit(f"refusing to split arc of size {k} with {arc.edge_count} edges")
    c = arc.center
    center = points[c]
    mid = (k + 1) // 2
    pivot_angle = angle_of(points[arc.order[arc.lo + mid - 1]] - center)
    alpha = pivot_angle - theta / 2
    if not 0.0 < alpha < math.pi:
        alpha = min(max(alpha, theta / 4), math.pi - theta / 4)
    s = split_direction(alpha, points.shape[1])

    before = oracle.query_count
    D = oracle.query(s)
    h_center = height(center, s)
    below = sum(1 for _, other in bigedges if height(points[other], s) < h_center)
    m_left = indegree(D, center, s) - below
    m_right = arc.edge_count - m_left

    left = EdgeArc(c, alpha, arc.alpha2, arc.order, arc.lo, arc.lo + mid, m_left)
    right = EdgeArc(c, arc.alpha1, alpha, arc.order, arc.lo + mid, arc.hi, m_right)
    if not (0 <= m_left <= left.size and 0 <= m_right <= right.size):
        raise InconsistentSplit(
            f"split at {c}: counts ({m_left}, {m_right}) do not fit sizes ({left.size}, {right.size})"
        )
    # only the two vertices next to the cut can be on the wrong side
    if not angle_of(points[arc.order[right.lo]] - center) < alpha < pivot_angle:
        raise InconsistentSplit(f"split line at {c} does not separate the halves")
    if observer is not None:
        observer.on_split(arc, left, right, oracle.query_count - before)
    return left, right
