"""Edge reconstruction from known vertex positions.

A sweep in increasing height along e2 runs, at every vertex, a radial binary
multi-search over the vertices above it.  Each split of an edge arc costs a
single diagram, so a vertex with k upward edges costs O(k log n) diagrams.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import VertexMismatch
from ..geometry import EPS, angles_from, as_points, basis_vector, cw_order, min_pairwise_angle
from ..graph import Edge, normalize_edge
from ..persistence import AugmentedDiagram, Oracle
from .arcs import EdgeArc, SearchObserver, indegree, split_arc


def _cw_sorted_edges(points: np.ndarray, v: int, others: Sequence[int]) -> list[tuple[int, int]]:
    if not others:
        return []
    others = np.asarray(others, dtype=np.intp)
    ang = angles_from(points[others], points[v])
    return [(v, int(w)) for w in others[np.argsort(-ang, kind="stable")]]


def find_up_edges(
    v: int,
    V_v: np.ndarray,
    in_v: Sequence[tuple[int, int]],
    theta: float,
    D: AugmentedDiagram,
    oracle: Oracle,
    points: np.ndarray,
    observer: SearchObserver | None = None,
) -> list[tuple[int, int]]:
    """Edges from ``v`` to the vertices above it, clockwise.

    ``V_v`` holds the vertices above ``v`` sorted clockwise, ``in_v`` the
    already known edges from ``v`` to vertices below it, and ``D`` the
    diagram in direction -e2, whose indegree at ``v`` counts the upward edges.
    """
    seed = indegree(D, points[v], D.direction)
    V_v = np.asarray(V_v, dtype=np.intp)
    root = EdgeArc(v, 0.0, math.pi, V_v, 0, len(V_v), seed)
    if seed > root.size:
        raise VertexMismatch(f"vertex {v} reports {seed} upward edges but has {root.size} vertices above")
    stack = [root]
    found: list[tuple[int, int]] = []
    if observer is not None:
        observer.on_arc(root)
    while stack:
        if observer is not None:
            observer.on_iteration(v, stack, found)
        arc = stack.pop()
        if arc.edge_count == 0:
            continue
        if arc.edge_count == arc.size:
            found.extend((v, int(w)) for w in arc.verts)
            continue
        left, right = split_arc(arc, list(in_v) + found, theta, oracle, points, observer)
        if observer is not None:
            observer.on_arc(left)
            observer.on_arc(right)
        stack.append(right)
        stack.append(left)
    if observer is not None:
        observer.on_iteration(v, stack, found)
    return found


def upward_orders(points: np.ndarray, eps: float = EPS) -> list[np.ndarray]:
    """For every vertex, the vertices strictly above it in e2, clockwise."""
    y = points[:, 1]
    return [cw_order(points, v, np.nonzero(y > y[v])[0], eps) for v in range(len(points))]


def _check_vertices(D: AugmentedDiagram, points: np.ndarray, eps: float) -> None:
    expected = np.sort(-points[:, 1])
    got = D.vertex_heights
    if len(got) != len(expected):
        raise VertexMismatch(f"diagram has {len(got)} vertex events, {len(expected)} vertices given")
    bad = np.nonzero(np.abs(got - expected) > eps)[0]
    if bad.size:
        raise VertexMismatch(f"diagram event at height {float(got[bad[0]])!r} has no matching vertex")


def find_edges(
    V,
    oracle: Oracle,
    eps: float = EPS,
    observer: SearchObserver | None = None,
) -> set[Edge]:
    """Recover the hidden edge set given its vertex coordinates."""
    points = as_points(V)
    n, d = points.shape
    D = oracle.query(-basis_vector(1, d))
    _check_vertices(D, points, eps)
    if n < 2:
        return set()
    orders = upward_orders(points, eps)
    theta = min_pairwise_angle(points) if n >= 3 else math.pi

    edges: set[Edge] = set()
    below: list[list[int]] = [[] for _ in range(n)]
    for v in np.argsort(points[:, 1], kind="stable"):
        v = int(v)
        if observer is not None:
            observer.on_vertex(v, edges)
        in_v = _cw_sorted_edges(points, v, below[v])
        for _, w in find_up_edges(v, orders[v], in_v, theta, D, oracle, points, observer):
            edges.add(normalize_edge(v, w))
            below[w].append(v)
    return edges
