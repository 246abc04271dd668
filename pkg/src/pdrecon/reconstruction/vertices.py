"""Vertex recovery from d + 1 diagrams.

The diagrams along e1, ..., e_d give every coordinate value (one
zero-dimensional birth per vertex), but not which values belong together.
A diagram along a generic direction picks the true combinations out of the
grid of all of them.  This needs distinct coordinates along every axis.
"""

from __future__ import annotations

import numpy as np

from ..errors import AmbiguousCandidates
from ..geometry import EPS, basis_vector
from ..persistence import Oracle

_GENERIC_WEIGHTS = np.sqrt(np.array([2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0]))


def generic_direction(d: int, attempt: int = 0) -> np.ndarray:
    w = np.resize(_GENERIC_WEIGHTS, d) * np.where(np.arange(d) % 2, 1.0, -1.0)
    if attempt:
        w = w + attempt * np.cbrt(np.arange(1.0, d + 1.0))
    return w / np.linalg.norm(w)


def _grid_matches(axes: list[np.ndarray], s0: np.ndarray, events: np.ndarray, eps: float):
    """Grid points whose height along ``s0`` lies within ``eps`` of an event.

    Partial sums are accumulated axis by axis, the same order of operations
    the oracle uses, so true vertices reproduce their event heights exactly.
    Returns ``(index_tuples, event_index, distance)`` arrays.
    """
    d = len(axes)
    lead = axes[0] * s0[0]
    idx = np.arange(len(axes[0]))[:, None]
    for k in range(1, d - 1):
        lead = (lead[:, None] + (axes[k] * s0[k])[None, :]).ravel()
        idx = np.hstack([np.repeat(idx, len(axes[k]), axis=0), np.tile(np.arange(len(axes[k])), len(idx))[:, None]])
    found_idx, found_evt, found_dist = [], [], []
    last = axes[d - 1] * s0[d - 1]
    for j, term in enumerate(last):
        h = lead + term
        pos = np.clip(np.searchsorted(events, h), 1, len(events) - 1)
        left, right = events[pos - 1], events[pos]
        nearest = np.where(np.abs(h - left) <= np.abs(h - right), pos - 1, pos)
        dist = np.abs(h - events[nearest])
        hit = np.nonzero(dist <= eps)[0]
        if hit.size:
            found_idx.append(np.hstack([idx[hit], np.full((hit.size, 1), j)]))
            found_evt.append(nearest[hit])
            found_dist.append(dist[hit])
    if not found_idx:
        return np.zeros((0, d), dtype=int), np.zeros(0, dtype=int), np.zeros(0)
    return np.vstack(found_idx), np.concatenate(found_evt), np.concatenate(found_dist)


def _select(axes, s0, events, eps):
    n = len(events)
    if len(events) == 1:
        events = np.append(events, np.inf)
    cand, evt, dist = _grid_matches(axes, s0, events, eps)
    # keep the closest grid point for each event height
    chosen = {}
    for row, e, dd in zip(cand, evt, dist):
        e = int(e)
        if e not in chosen or dd < chosen[e][1]:
            chosen[e] = (row, dd)
    if len(chosen) != n:
        return None
    rows = np.array([chosen[e][0] for e in sorted(chosen)])
    # a consistent assignment uses every coordinate value once per axis
    for k in range(len(axes)):
        if len(np.unique(rows[:, k])) != n:
            return None
    return rows, len(cand)


def reconstruct_vertices(oracle: Oracle, d: int, eps: float = EPS) -> np.ndarray:
    """Recover the hidden vertex coordinates with ``d + 1`` oracle queries."""
    axes = [oracle.query(basis_vector(k, d)).vertex_heights for k in range(d)]
    n = len(axes[0])
    for attempt in range(2):
        s0 = generic_direction(d, attempt)
        events = oracle.query(s0).vertex_heights
        if len(events) != n:
            raise AmbiguousCandidates("diagrams disagree on the number of vertices")
        picked = _select(axes, s0, events, eps)
        if picked is not None:
            rows, _ = picked
            V = np.column_stack([axes[k][rows[:, k]] for k in range(d)])
            return V[np.argsort(V[:, 1], kind="stable")]
    raise AmbiguousCandidates("generic diagrams do not single out the vertex set")
