"""Augmented persistence diagrams of directional lower-star filtrations.

Every vertex and every edge of the filtration produces exactly one event:
vertices are zero-dimensional births, an edge either kills the younger of the
two components it joins (elder rule) or gives birth to a one-cycle.
"""

from __future__ import annotations

import json
import math
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import TiedHeights
from .geometry import EPS, as_direction, heights
from .graph import ImmersedGraph, lower_star_heights

INF = math.inf


class _UnionFind:
    def __init__(self, n: int, birth: np.ndarray):
        self.parent = list(range(n))
        self.birth = [float(b) for b in birth]

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root


def _sorted(values) -> np.ndarray:
    return np.sort(np.asarray(values, dtype=float))


@dataclass(eq=False)
class AugmentedDiagram:
    """Dimension-0 and dimension-1 points of one directional diagram.

    ``dim0`` and ``dim1`` are ``(k, 2)`` arrays of ``(birth, death)`` rows with
    ``inf`` for deaths that never happen.  Births and deaths are also kept in
    sorted arrays so that height queries cost O(log(n + m)).
    """

    direction: np.ndarray
    dim0: np.ndarray
    dim1: np.ndarray
    eps: float = EPS
    _births0: np.ndarray = field(init=False, repr=False)
    _deaths0: np.ndarray = field(init=False, repr=False)
    _births1: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.dim0 = np.asarray(self.dim0, dtype=float).reshape(-1, 2)
        self.dim1 = np.asarray(self.dim1, dtype=float).reshape(-1, 2)
        self._births0 = _sorted(self.dim0[:, 0])
        self._deaths0 = _sorted(self.dim0[:, 1])
        self._births1 = _sorted(self.dim1[:, 0])

    @staticmethod
    def _count(arr: np.ndarray, c: float, eps: float) -> int:
        lo = np.searchsorted(arr, c - eps, side="left")
        hi = np.searchsorted(arr, c + eps, side="right")
        return int(hi - lo)

    def count_dim1_births_at(self, c: float) -> int:
        return self._count(self._births1, c, self.eps)

    def count_dim0_deaths_at(self, c: float) -> int:
        return self._count(self._deaths0, c, self.eps)

    def count_dim0_births_at(self, c: float) -> int:
        return self._count(self._births0, c, self.eps)

    def edges_at(self, c: float) -> int:
        """Number of edges with filter value ``c`` (one-cycle births plus merges)."""
        return self.count_dim1_births_at(c) + self.count_dim0_deaths_at(c)

    @property
    def vertex_heights(self) -> np.ndarray:
        """Sorted zero-dimensional births: one per vertex."""
        return self._births0

    @property
    def size(self) -> int:
        """Number of events: one per simplex, so n + m for a graph."""
        finite_deaths = int(np.isfinite(self.dim0[:, 1]).sum())
        return len(self.dim0) + finite_deaths + len(self.dim1)

    def finite_pairs(self, dim: int) -> list[tuple[float, float]]:
        pts = self.dim0 if dim == 0 else self.dim1
        return sorted((float(b), float(d)) for b, d in pts if math.isfinite(d))

    def essential_births(self, dim: int) -> list[float]:
        pts = self.dim0 if dim == 0 else self.dim1
        return sorted(float(b) for b, d in pts if not math.isfinite(d))

    def to_dict(self) -> dict:
        def rows(pts):
            return [[float(b), float(d) if math.isfinite(d) else None] for b, d in pts]

        order0 = np.lexsort((self.dim0[:, 1], self.dim0[:, 0]))
        order1 = np.argsort(self.dim1[:, 0], kind="stable")
        return {
            "direction": [float(x) for x in self.direction],
            "dim0": rows(self.dim0[order0]),
            "dim1": rows(self.dim1[order1]),
        }

    @classmethod
    def from_dict(cls, data: dict, eps: float = EPS) -> "AugmentedDiagram":
        def rows(pts):
            return np.array(
                [[b, INF if d is None else d] for b, d in pts], dtype=float
            ).reshape(-1, 2)

        return cls(np.asarray(data["direction"], dtype=float), rows(data["dim0"]), rows(data["dim1"]), eps)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def compute_apd(G: ImmersedGraph, s, eps: float = EPS) -> AugmentedDiagram:
    """Augmented persistence diagram of ``G`` filtered by height along ``s``."""
    s = as_direction(s)
    h = heights(G.vertices, s)
    if G.n > 1:
        order = np.argsort(h, kind="stable")
        gaps = np.diff(h[order])
        k = int(np.argmin(gaps))
        if gaps[k] <= eps:
            i, j = sorted((int(order[k]), int(order[k + 1])))
            raise TiedHeights(i, j, float(h[order[k]]))

    uf = _UnionFind(G.n, h)
    dim0 = []
    dim1 = []
    for fv in lower_star_heights(G, s):
        if fv.is_vertex:
            continue
        a, b = (uf.find(x) for x in fv.simplex)
        if a == b:
            dim1.append((fv.height, INF))
            continue
        if uf.birth[a] > uf.birth[b]:
            a, b = b, a
        # b is the younger component: it dies here
        dim0.append((uf.birth[b], fv.height))
        uf.parent[b] = a
    for v in range(G.n):
        if uf.find(v) == v:
            dim0.append((uf.birth[v], INF))
    return AugmentedDiagram(s.copy(), np.array(dim0).reshape(-1, 2), np.array(dim1).reshape(-1, 2), eps)


@dataclass
class OracleStats:
    query_count: int = 0
    total_query_time: float = 0.0
    per_direction_log: list = field(default_factory=list)

    def snapshot(self) -> "OracleStats":
        return OracleStats(self.query_count, self.total_query_time, [d.copy() for d in self.per_direction_log])


class Oracle:
    """The only window onto a hidden graph: one diagram per requested direction.

    Queries are counted and timed.  Nothing is cached, so asking twice for
    the same direction costs two queries.
    """

    def __init__(self, hidden: ImmersedGraph, eps: float = EPS):
        self._hidden = hidden
        self.eps = eps
        self.stats = OracleStats()
        self._lock = threading.Lock()

    @property
    def dimension(self) -> int:
        return self._hidden.dimension

    def query(self, s) -> AugmentedDiagram:
        start = time.perf_counter()
        try:
            return compute_apd(self._hidden, s, self.eps)
        finally:
            elapsed = time.perf_counter() - start
            with self._lock:
                self.stats.query_count += 1
                self.stats.total_query_time += elapsed
                self.stats.per_direction_log.append(np.array(s, dtype=float))

    @property
    def query_count(self) -> int:
        return self.stats.query_count


def oracle_query(oracle: Oracle, s) -> AugmentedDiagram:
    return oracle.query(s)
