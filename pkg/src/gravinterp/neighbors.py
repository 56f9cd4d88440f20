"""Exact k-nearest-neighbor search and the dataset scaling parameter.

All distances are Euclidean in 3-D Cartesian coordinates. Results are
deterministic: ties at equal distance are broken by ascending original
point index, so repeated queries return identical neighbor sets no
matter how the search tree orders its candidates internally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

__all__ = ["SpatialIndex", "NeighborSet", "build_index", "k_nearest", "fill_distance"]


def _distances(points: np.ndarray, query: np.ndarray) -> np.ndarray:
    diff = points - query
    return np.sqrt(np.sum(diff * diff, axis=-1))


@dataclass(frozen=True)
class NeighborSet:
    """The n nearest known points to one query, ascending by distance.

    ``delta`` is the distance to the farthest member, the per-query
    support radius.
    """

    indices: np.ndarray
    distances: np.ndarray

    def __post_init__(self):
        if len(self.indices) == 0 or len(self.indices) != len(self.distances):
            raise ValueError("indices and distances must be non-empty and aligned")
        if np.any(np.diff(self.distances) < 0):
            raise ValueError("distances must be non-decreasing")
        if self.distances[0] < 0:
            raise ValueError("distances must be non-negative")
        if len(np.unique(self.indices)) != len(self.indices):
            raise ValueError("neighbor indices must be distinct")

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def delta(self) -> float:
        return float(self.distances[-1])


class SpatialIndex:
    """Immutable exact-kNN index over a fixed 3-D point set.

    Backed by a k-d tree; safe for concurrent read-only queries.
    """

    def __init__(self, points):
        pts = np.array(points, dtype=float, copy=True)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must have shape (N, 3)")
        if len(pts) == 0:
            raise ValueError("cannot index an empty point set")
        pts.setflags(write=False)
        self._points = pts
        self._tree = cKDTree(pts)

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def size(self) -> int:
        return len(self._points)

    @property
    def tree(self) -> cKDTree:
        return self._tree


def build_index(points) -> SpatialIndex:
    """Build an immutable spatial index supporting exact k-NN queries."""
    return SpatialIndex(points)


def k_nearest(index: SpatialIndex, query, n: int) -> NeighborSet:
    """Exact n nearest indexed points to ``query``.

    Ties at equal distance are resolved by ascending point index. The
    tree only proposes candidates; distances are recomputed with a single
    shared formula and sorted stably, so the output is identical to a
    brute-force scan.
    """
    if not 1 <= n <= index.size:
        raise ValueError(f"n={n} outside [1, {index.size}]")
    q = np.asarray(query, dtype=float)
    if q.shape != (3,):
        raise ValueError("query must be a single 3-D point")

    kth = np.atleast_1d(index.tree.query(q, k=n)[0])[-1]
    # inflate to absorb ulp-level disagreement between the tree's metric
    # and the recomputation below; candidates are a superset of the true n
    radius = kth * (1.0 + 1e-9)
    candidates = np.sort(
        np.asarray(index.tree.query_ball_point(q, radius), dtype=np.int64)
    )
    if len(candidates) < n:  # paranoia fallback, not expected to trigger
        candidates = np.arange(index.size, dtype=np.int64)
    dist = _distances(index.points[candidates], q)
    order = np.argsort(dist, kind="stable")[:n]
    return NeighborSet(indices=candidates[order], distances=dist[order])


def fill_distance(known_index: SpatialIndex, queries) -> float:
    """Scaling parameter: max over queries of the nearest-known distance.

    Zero when every query coincides with a known point; downstream
    coordinate scaling rejects that as degenerate.
    """
    q = np.asarray(queries, dtype=float)
    if q.ndim != 2 or q.shape[1] != 3 or len(q) == 0:
        raise ValueError("queries must have shape (M, 3) with M >= 1")
    nearest, _ = known_index.tree.query(q, k=1)
    return float(np.max(nearest))
