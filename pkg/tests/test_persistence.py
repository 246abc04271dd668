import json
import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdrecon.errors import TiedHeights
from pdrecon.graph import from_edges, generate_gp_graph
from pdrecon.persistence import AugmentedDiagram, Oracle, compute_apd

from oracles import boundary_reduction_diagram

INF = math.inf

EDGE = from_edges([(0, 0), (2, 1)], [(0, 1)])
TRIANGLE = from_edges([(0, 0), (2, 1), (1, 2)], [(0, 1), (0, 2), (1, 2)])


def _as_lists(D):
    return sorted(map(tuple, D.dim0.tolist())), sorted(map(tuple, D.dim1.tolist()))


def test_single_vertex():
    D = compute_apd(from_edges([(0, 3)], []), (0, 1))
    assert _as_lists(D) == ([(3.0, INF)], [])


def test_edge_diagram():
    # values from boundary_reduction_diagram on the same three simplices
    assert _as_lists(compute_apd(EDGE, (0, 1))) == ([(0.0, INF), (1.0, 1.0)], [])


def test_triangle_diagram():
    dim0, dim1 = _as_lists(compute_apd(TRIANGLE, (0, 1)))
    assert dim0 == [(0.0, INF), (1.0, 1.0), (2.0, 2.0)]
    assert dim1 == [(2.0, INF)]


def test_ties_raise():
    G = from_edges([(0, 1), (1, 1), (2, 0)], [])
    with pytest.raises(TiedHeights) as info:
        compute_apd(G, (0, 1))
    assert info.value.pair == (0, 1)


def test_counts_triangle():
    D = compute_apd(TRIANGLE, (0, 1))
    assert D.count_dim1_births_at(2.0) == 1
    assert D.count_dim0_deaths_at(2.0) == 1
    assert D.count_dim1_births_at(0.5) == 0
    assert D.count_dim0_deaths_at(0.5) == 0


def test_counts_edge():
    assert compute_apd(EDGE, (0, 1)).count_dim0_deaths_at(1.0) == 1


def test_elder_rule_pairs_younger_birth():
    # two components born at 0 and 1 merge at 2: the one born at 1 dies
    G = from_edges([(0, 0), (3, 1), (1.5, 2)], [(0, 2), (1, 2)])
    dim0, _ = _as_lists(compute_apd(G, (0, 1)))
    assert dim0 == [(0.0, INF), (1.0, 2.0), (2.0, 2.0)]


def _random_graph(rng, n, d, density):
    V = rng.random((n, d))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return from_edges(V, pairs)


def _random_direction(rng, d):
    s = rng.normal(size=d)
    return s / np.linalg.norm(s)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 10), st.integers(2, 4), st.floats(0, 1))
def test_matches_boundary_reduction(seed, n, d, density):
    rng = np.random.default_rng(seed)
    G = _random_graph(rng, n, d, density)
    s = _random_direction(rng, d)
    D = compute_apd(G, s)
    dim0, dim1 = boundary_reduction_diagram(G.vertices, G.edges, s)
    ours0, ours1 = _as_lists(D)
    assert len(ours0) == len(dim0) and len(ours1) == len(dim1)
    for a, b in zip(ours0 + ours1, dim0 + dim1):
        assert a[0] == pytest.approx(b[0], abs=1e-12)
        assert a[1] == b[1] or a[1] == pytest.approx(b[1], abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 12), st.integers(2, 4), st.floats(0, 1))
def test_size_and_components(seed, n, d, density):
    rng = np.random.default_rng(seed)
    G = _random_graph(rng, n, d, density)
    D = compute_apd(G, _random_direction(rng, d))
    assert D.size == G.n + G.m
    assert len(D.dim0) == G.n
    finite0 = int(np.isfinite(D.dim0[:, 1]).sum())
    assert finite0 + len(D.dim1) == G.m
    # essential classes = number of connected components
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in G.edges:
        parent[find(i)] = find(j)
    assert n - finite0 == len({find(i) for i in range(n)})
    assert np.all(D.dim0[:, 0] <= D.dim0[:, 1])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(2, 12), st.integers(2, 4))
def test_edge_count_identity(seed, n, d):
    rng = np.random.default_rng(seed)
    G = _random_graph(rng, n, d, 0.5)
    s = _random_direction(rng, d)
    D = compute_apd(G, s)
    h = G.vertices @ s
    for c in np.concatenate([D.dim0[:, 0], D.dim1[:, 0]]):
        truth = sum(1 for i, j in G.edges if abs(max(h[i], h[j]) - c) <= 1e-9)
        assert D.count_dim1_births_at(c) + D.count_dim0_deaths_at(c) == truth


def test_translation_perpendicular_to_direction():
    G = generate_gp_graph(9, 14, 3, 4)
    s = np.array([0.0, 1.0, 0.0])
    shift = np.array([3.0, 0.0, -2.0])
    moved = from_edges(G.vertices + shift, G.edges)
    a, b = compute_apd(G, s), compute_apd(moved, s)
    assert _as_lists(a) == _as_lists(b)


def test_json_round_trip():
    D = compute_apd(TRIANGLE, (0, 1))
    doc = json.loads(D.to_json())
    assert doc["dim0"] == [[0.0, None], [1.0, 1.0], [2.0, 2.0]]
    assert doc["dim1"] == [[2.0, None]]
    again = AugmentedDiagram.from_dict(doc)
    assert _as_lists(again) == _as_lists(D)


def test_oracle_counts_every_query():
    G = generate_gp_graph(6, 7, 2, 0)
    O = Oracle(G)
    O.query((0.0, 1.0))
    O.query((0.0, -1.0))
    assert O.query_count == 2
    O.query((0.0, 1.0))
    assert O.query_count == 3
    assert len(O.stats.per_direction_log) == 3
    assert O.stats.total_query_time > 0


def test_oracle_diagram_size():
    G = generate_gp_graph(12, 20, 3, 2)
    D = Oracle(G).query((0.0, 1.0, 0.0))
    assert D.size == 32


def test_oracle_tied_query_propagates():
    O = Oracle(from_edges([(0, 0), (1, 1)], []))
    with pytest.raises(TiedHeights):
        O.query((1 / math.sqrt(2), -1 / math.sqrt(2)))


def test_oracle_concurrent_counting():
    G = generate_gp_graph(8, 10, 2, 1)
    O = Oracle(G)
    rng = np.random.default_rng(0)
    dirs = [_random_direction(rng, 2) for _ in range(40)]

    def work(chunk):
        for s in chunk:
            O.query(s)

    threads = [threading.Thread(target=work, args=(dirs[i::4],)) for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert O.query_count == 40 == len(O.stats.per_direction_log)
