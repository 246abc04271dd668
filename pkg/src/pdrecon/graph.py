"""Immersed graphs: data model, lower-star filter values, JSON I/O, generation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .errors import GenerationFailure, GpViolation, ParseError
from .geometry import EPS, as_direction, axis_ties, gp_check, heights

Edge = tuple[int, int]

GENERATOR_EPS = 1e-6
MAX_REJECTION_ROUNDS = 200


def normalize_edge(i: int, j: int) -> Edge:
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True, eq=False)
class ImmersedGraph:
    """A simple graph whose vertices are points of R^d (edges may cross)."""

    vertices: np.ndarray
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float)
        if V.ndim == 1 and V.size == 0:
            V = V.reshape(0, 2)
        if V.ndim != 2 or V.shape[1] < 2:
            raise ValueError(f"vertices must be an (n, d) array with d >= 2, got {V.shape}")
        if not np.all(np.isfinite(V)):
            raise ValueError("vertex coordinates must be finite")
        V.setflags(write=False)
        n = len(V)
        edges = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {(i, j)} out of range for {n} vertices")
            key = normalize_edge(i, j)
            if key in edges:
                raise ValueError(f"duplicate edge {key}")
            edges.add(key)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "edges", frozenset(edges))

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __eq__(self, other):
        if not isinstance(other, ImmersedGraph):
            return NotImplemented
        return (
            self.vertices.shape == other.vertices.shape
            and np.array_equal(self.vertices, other.vertices)
            and self.edges == other.edges
        )

    __hash__ = None

    def validate_gp(self, eps: float = EPS, strict: bool = False):
        """Raise GpViolation unless the vertices are in general position.

        ``strict`` additionally demands distinct coordinates along every axis,
        which vertex reconstruction needs.
        """
        report = gp_check(self.vertices, eps)
        if strict:
            ties = axis_ties(self.vertices, eps)
            if ties:
                report.unique_height_ok = False
                report.witnesses.extend(ties)
        if not report.ok:
            raise GpViolation(report)
        return report


@dataclass(frozen=True)
class FilterValue:
    simplex: Union[int, Edge]
    height: float

    @property
    def is_vertex(self) -> bool:
        return isinstance(self.simplex, int)


def lower_star_heights(G: ImmersedGraph, s) -> list[FilterValue]:
    """Lower-star filter values in direction ``s``, in filtration order.

    Ties are broken vertices first, then by index, so the order is total.
    """
    s = as_direction(s)
    h = heights(G.vertices, s)
    out = [FilterValue(i, float(h[i])) for i in range(G.n)]
    out += [FilterValue(e, float(max(h[e[0]], h[e[1]]))) for e in G.sorted_edges()]

    def key(fv: FilterValue):
        if fv.is_vertex:
            return (fv.height, 0, fv.simplex, 0)
        return (fv.height, 1, fv.simplex[0], fv.simplex[1])

    return sorted(out, key=key)


def _strict_ok(V: np.ndarray, eps: float):
    # a fixed determinant floor of 1e-6 is violated by dozens of (d+1)-subsets
    # of any 50-point sample in R^4, so affine independence uses the global eps
    report = gp_check(V, eps, affine_eps=min(eps, EPS))
    ties = axis_ties(V, eps)
    return report, ties


def generate_gp_graph(n: int, m: int, d: int, seed: int, eps: float = GENERATOR_EPS) -> ImmersedGraph:
    """Random graph with vertices in general position in the unit cube.

    Offending vertices are resampled until the set passes ``gp_check`` and has
    distinct coordinates along every axis.  Edges are a uniform sample.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if d < 2:
        raise ValueError("d must be at least 2")
    max_m = n * (n - 1) // 2
    if not 0 <= m <= max_m:
        raise ValueError(f"m must be in [0, {max_m}] for n={n}")
    rng = np.random.default_rng(seed)
    V = rng.random((n, d))
    for _ in range(MAX_REJECTION_ROUNDS):
        report, ties = _strict_ok(V, eps)
        if report.ok and not ties:
            break
        bad = {w[-1] for w in report.witnesses} | {t[-1] for t in ties}
        for i in sorted(bad):
            V[i] = rng.random(d)
    else:
        raise GenerationFailure(
            f"no general-position sample after {MAX_REJECTION_ROUNDS} rounds (n={n}, d={d})"
        )
    picks = rng.choice(max_m, size=m, replace=False) if m else np.array([], dtype=int)
    return ImmersedGraph(V, frozenset(_unrank_pair(int(k), n) for k in picks))


def _unrank_pair(k: int, n: int) -> Edge:
    # k-th pair (i, j), i < j, in lexicographic order
    i = 0
    row = n - 1
    while k >= row:
        k -= row
        i += 1
        row -= 1
    return (i, i + 1 + k)


def graph_to_dict(G: ImmersedGraph) -> dict:
    return {
        "dimension": G.dimension,
        "vertices": [[float(x) for x in row] for row in G.vertices],
        "edges": [list(e) for e in G.sorted_edges()],
    }


def graph_from_dict(data: dict) -> ImmersedGraph:
    try:
        d = data["dimension"]
        verts = data["vertices"]
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing field: {exc}") from exc
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ParseError(f"invalid dimension {d!r}")
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise ParseError("vertices and edges must be lists")
    for row in verts:
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"vertex {row!r} does not have {d} coordinates")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row):
            raise ParseError(f"non-numeric coordinate in {row!r}")
    pairs = []
    for e in edges:
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        ):
            raise ParseError(f"malformed edge {e!r}")
        pairs.append((e[0], e[1]))
    V = np.array(verts, dtype=float).reshape(len(verts), d)
    try:
        return ImmersedGraph(V, pairs)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def write_graph(G: ImmersedGraph, path) -> None:
    # json writes floats with repr, which round-trips exactly
    Path(path).write_text(json.dumps(graph_to_dict(G)) + "\n", encoding="utf-8")


def read_graph(path, eps: float = EPS, check_gp: bool = True) -> ImmersedGraph:
    """Load a graph JSON file, validating structure and general position."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    G = graph_from_dict(data)
    if check_gp:
        G.validate_gp(eps)
    return G


def count_edges_at(G: ImmersedGraph, s, c: float, eps: float = EPS) -> int:
    """Brute-force number of edges whose filter value in direction ``s`` is ``c``."""
    h = heights(G.vertices, as_direction(s))
    return sum(1 for i, j in G.edges if abs(max(h[i], h[j]) - c) <= eps)


def from_edges(vertices, edges: Iterable) -> ImmersedGraph:
    return ImmersedGraph(np.asarray(vertices, dtype=float), frozenset(normalize_edge(*e) for e in edges))
