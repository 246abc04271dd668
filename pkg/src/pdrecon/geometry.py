"""Planar projection, angles, general-position checks and basis tilting.

Points and directions are plain float64 numpy arrays.  Angles are floats in
``[0, 2*pi)`` measured from the positive first axis after projecting onto the
plane of the first two coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, DependentDirections, TiedAngle, ZeroProjection

EPS = 1e-9
TWO_PI = 2.0 * math.pi


def as_point(p) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2:
        raise ValueError(f"point must have at least 2 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def as_points(V) -> np.ndarray:
    arr = np.asarray(V, dtype=float)
    if arr.ndim == 1 and arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise ValueError(f"expected an (n, d) array with d >= 2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def as_direction(s, normalize: bool = False) -> np.ndarray:
    """Validate (or normalize) a unit direction vector."""
    arr = np.asarray(s, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 2 or not np.all(np.isfinite(arr)):
        raise ValueError(f"invalid direction {s!r}")
    norm = float(np.linalg.norm(arr))
    if normalize:
        if norm == 0.0:
            raise ValueError("direction must be nonzero")
        return arr / norm
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"direction must be a unit vector (norm {norm!r})")
    return arr


def basis_vector(i: int, d: int) -> np.ndarray:
    """The standard basis vector e_{i+1} of R^d (``i`` is zero-based)."""
    e = np.zeros(d)
    e[i] = 1.0
    return e


def embed_planar(x: float, y: float, d: int) -> np.ndarray:
    """Pad a vector of the (e1, e2)-plane with zeros up to R^d."""
    out = np.zeros(d)
    out[0] = x
    out[1] = y
    return out


def heights(points: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Heights ``s . p`` for every row ``p`` of ``points``.

    The sum is accumulated coordinate by coordinate, so one point evaluated
    alone gets the bit-identical value it gets inside a batch.  Code that
    compares heights computed in different places relies on this.
    """
    points = np.asarray(points, dtype=float)
    acc = points[..., 0] * s[0]
    for k in range(1, len(s)):
        acc = acc + points[..., k] * s[k]
    return acc


def height(p: np.ndarray, s: np.ndarray) -> float:
    return float(heights(p, s))


def project2(p) -> tuple[float, float]:
    p = as_point(p)
    return float(p[0]), float(p[1])


def _normalize_angle(a):
    a = np.where(a < 0.0, a + TWO_PI, a)
    return np.where(a >= TWO_PI, 0.0, a)


def angle_of(x) -> float:
    """Angle of the planar projection of ``x`` in ``[0, 2*pi)``."""
    x = np.asarray(x, dtype=float)
    if x[0] == 0.0 and x[1] == 0.0:
        raise ZeroProjection(f"projection of {x!r} is the origin")
    return float(_normalize_angle(math.atan2(x[1], x[0])))


def angles_from(points: np.ndarray, center: np.ndarray) -> np.ndarray:
    """Vectorised ``angle_of(p - center)`` over the rows of ``points``."""
    diff = np.asarray(points, dtype=float)[:, :2] - np.asarray(center, dtype=float)[:2]
    if np.any((diff[:, 0] == 0.0) & (diff[:, 1] == 0.0)):
        raise ZeroProjection("a point projects onto the center")
    return _normalize_angle(np.arctan2(diff[:, 1], diff[:, 0]))


def cw_order(points: np.ndarray, center: int, candidates, eps: float = EPS) -> np.ndarray:
    """Indices in ``candidates`` sorted by strictly decreasing angle about ``center``."""
    candidates = np.asarray(candidates, dtype=np.intp)
    if candidates.size == 0:
        return candidates
    ang = angles_from(points[candidates], points[center])
    order = np.argsort(-ang, kind="stable")
    sorted_ang = ang[order]
    gaps = sorted_ang[:-1] - sorted_ang[1:]
    if gaps.size and gaps.min() <= eps:
        k = int(np.argmin(gaps))
        raise TiedAngle(
            f"candidates {int(candidates[order[k]])} and {int(candidates[order[k + 1]])} "
            f"are at the same angle about {center}"
        )
    return candidates[order]


def radial_cw_order(v, C, eps: float = EPS) -> list[np.ndarray]:
    """Sort the points ``C`` clockwise about ``v``, largest angle first."""
    if len(C) == 0:
        return []
    pts = np.vstack([as_point(v)] + [as_point(c) for c in C])
    idx = cw_order(pts, 0, np.arange(1, len(pts)), eps=eps)
    return [pts[i] for i in idx]


@dataclass
class GpReport:
    affine_ok: bool
    projection_ok: bool
    unique_height_ok: bool
    witnesses: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.affine_ok and self.projection_ok and self.unique_height_ok

    def summary(self) -> str:
        failed = [
            name
            for name, flag in (
                ("affine", self.affine_ok),
                ("projection", self.projection_ok),
                ("unique_height", self.unique_height_ok),
            )
            if not flag
        ]
        shown = ", ".join(map(str, self.witnesses[:5]))
        more = "" if len(self.witnesses) <= 5 else f" (+{len(self.witnesses) - 5} more)"
        return f"failed {failed}; witnesses {shown}{more}"

    def to_dict(self) -> dict:
        return {
            "affine_ok": self.affine_ok,
            "projection_ok": self.projection_ok,
            "unique_height_ok": self.unique_height_ok,
            "witnesses": [list(w) for w in self.witnesses],
        }


def _combinations(n: int, k: int, start: int = 0) -> np.ndarray:
    """All increasing k-tuples from ``range(start, n)`` as rows, in lexicographic order."""
    combos = np.arange(start, n, dtype=np.intp)[:, None]
    for _ in range(k - 1):
        counts = n - 1 - combos[:, -1]
        rows = np.repeat(combos, counts, axis=0)
        offsets = np.arange(len(rows)) - np.repeat(np.cumsum(counts) - counts, counts)
        combos = np.hstack([rows, (rows[:, -1] + 1 + offsets)[:, None]])
    return combos


def _combination_chunks(n: int, k: int):
    """k-subsets of ``range(n)`` grouped by their smallest element."""
    for first in range(n - k + 1):
        rest = _combinations(n, k - 1, first + 1) if k > 1 else np.zeros((1, 0), dtype=np.intp)
        if len(rest):
            yield np.hstack([np.full((len(rest), 1), first, dtype=np.intp), rest])


def _batched_det(mats: np.ndarray) -> np.ndarray:
    k = mats.shape[-1]
    if k == 2:
        return mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    if k == 3:
        a, b, c = mats[:, 0], mats[:, 1], mats[:, 2]
        return np.einsum("ij,ij->i", a, np.cross(b, c))
    if k == 4:
        # Laplace expansion along the first two rows
        total = np.zeros(len(mats))
        cols = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        for (i, j) in cols:
            p, q = [c for c in range(4) if c not in (i, j)]
            sign = 1.0 if (i + j) % 2 else -1.0
            top = mats[:, 0, i] * mats[:, 1, j] - mats[:, 0, j] * mats[:, 1, i]
            bottom = mats[:, 2, p] * mats[:, 3, q] - mats[:, 2, q] * mats[:, 3, p]
            total += sign * top * bottom
        return total
    return np.linalg.det(mats)


def _affine_witnesses(V: np.ndarray, eps: float) -> list[tuple[int, ...]]:
    n, d = V.shape
    if n <= 1:
        return []
    if n <= d:
        # fewer than d+1 points: the whole set must be affinely independent
        rank = np.linalg.matrix_rank(V[1:] - V[0], tol=eps)
        return [] if rank == n - 1 else [tuple(range(n))]
    out = []
    for combo in _combination_chunks(n, d + 1):
        base = V[combo[:, 0]]
        mats = V[combo[:, 1:]] - base[:, None, :]
        dets = np.abs(_batched_det(mats))
        bad = np.nonzero(dets <= eps)[0]
        out.extend(tuple(int(i) for i in combo[b]) for b in bad)
    return out


def _collinear_witnesses(P2: np.ndarray, eps: float) -> list[tuple[int, ...]]:
    n = P2.shape[0]
    out = []
    if n < 3:
        return out
    for combo in _combination_chunks(n, 3):
        a, b, c = P2[combo[:, 0]], P2[combo[:, 1]], P2[combo[:, 2]]
        ab, ac = b - a, c - a
        area = 0.5 * np.abs(ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
        bad = np.nonzero(area <= eps)[0]
        out.extend(tuple(int(i) for i in combo[b]) for b in bad)
    return out


def _height_witnesses(h: np.ndarray, eps: float) -> list[tuple[int, ...]]:
    order = np.argsort(h, kind="stable")
    hs = h[order]
    out = []
    # all pairs inside an eps-cluster, found by sweeping the sorted heights
    for a in range(len(hs)):
        b = a + 1
        while b < len(hs) and hs[b] - hs[a] <= eps:
            i, j = sorted((int(order[a]), int(order[b])))
            out.append((i, j))
            b += 1
    return out


def gp_check(V, eps: float = EPS, affine_eps: float | None = None) -> GpReport:
    """Check the three general-position conditions; never raises on failure.

    ``affine_eps`` overrides the determinant tolerance of the affine
    independence test (defaults to ``eps``).
    """
    V = as_points(V)
    affine = _affine_witnesses(V, eps if affine_eps is None else affine_eps)
    collinear = _collinear_witnesses(V[:, :2], eps)
    ties = _height_witnesses(V[:, 1], eps) if len(V) else []
    return GpReport(
        affine_ok=not affine,
        projection_ok=not collinear,
        unique_height_ok=not ties,
        witnesses=affine + collinear + ties,
    )


def axis_ties(V, eps: float = EPS) -> list[tuple[int, int, int]]:
    """Pairs ``(axis, i, j)`` of vertices sharing a coordinate along some axis."""
    V = as_points(V)
    return [(k, i, j) for k in range(V.shape[1]) for i, j in _height_witnesses(V[:, k], eps)]


def min_pairwise_angle(V) -> float:
    """Smallest angle at any apex of a triangle formed by three projected points.

    Around each apex the other points are sorted by angle; the minimum is
    attained between two cyclically consecutive directions.
    """
    V = as_points(V)
    n = len(V)
    if n < 3:
        raise DegenerateInput("need at least three points")
    best = math.pi
    for v in range(n):
        others = np.delete(np.arange(n), v)
        ang = np.sort(angles_from(V[others], V[v]))
        gaps = np.diff(np.append(ang, ang[0] + TWO_PI))
        gaps = np.minimum(gaps, TWO_PI - gaps)
        best = min(best, float(gaps.min()))
    return best


def tilt(s, s2, P) -> np.ndarray:
    """Perturb ``s`` towards ``s2`` just enough to break its ties on ``P``.

    Strict order along ``s`` is kept, ties along ``s`` are broken by the order
    along ``s2``, and points tied in both stay tied.
    """
    s = as_direction(s)
    s2 = as_direction(s2)
    if abs(abs(float(np.dot(s, s2))) - 1.0) <= 1e-12:
        raise DependentDirections("s and s2 must be linearly independent")
    P = as_points(P) if len(P) else np.zeros((0, len(s)))
    lam = 1.0
    if len(P) > 1:
        hs = np.unique(heights(P, s))
        h2 = heights(P, s2)
        spread = float(h2.max() - h2.min())
        if len(hs) > 1 and spread > 0.0:
            lam = float(np.diff(hs).min()) / (2.0 * spread)
    out = s + lam * s2
    return out / np.linalg.norm(out)


def build_basis(P) -> list[np.ndarray]:
    """Orthonormal basis whose second vector separates every point of ``P``."""
    P = as_points(P)
    d = P.shape[1]
    b2 = tilt(basis_vector(0, d), basis_vector(1, d), P)
    x, y = b2[0], b2[1]
    # Gram-Schmidt of e1 against (x, y): e1 - x/(x^2+y^2) * (x, y) equals
    # y/(x^2+y^2) * (y, -x).  The closed form avoids the cancellation in
    # 1 - x^2 when b2 is nearly parallel to e1, which is the usual case.
    b1_plane = (y / (x * x + y * y)) * np.array([y, -x])
    b1 = embed_planar(*(b1_plane / np.linalg.norm(b1_plane)), d)
    return [b1, b2] + [basis_vector(i, d) for i in range(2, d)]
