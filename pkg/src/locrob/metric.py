"""Finite metric spaces: explicit matrices, Euclidean point sets, and
graph-induced shortest-path metrics.

All distances are kept in a dense float64 matrix so lookups are uniform
across variants.  Explicit matrices are checked against the metric axioms
on construction (symmetry, zero diagonal, nonnegativity, triangle
inequality); the other two variants satisfy them by construction.
"""

from __future__ import annotations

import numpy as np

from .errors import DisconnectedMetric, InvalidPoint

# Absolute tolerance used for all float comparisons on distances.
TOL = 1e-9

# Universes larger than this skip the eager O(n^3) triangle validation.
VALIDATION_CAP = 512


def _check_axioms(matrix: np.ndarray) -> None:
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError("distance matrix must be square")
    if np.any(np.abs(np.diag(matrix)) > TOL):
        raise ValueError("distance matrix has nonzero diagonal")
    if np.any(matrix < -TOL):
        raise ValueError("distance matrix has negative entries")
    if np.any(np.abs(matrix - matrix.T) > TOL):
        raise ValueError("distance matrix is not symmetric")
    if n > VALIDATION_CAP:
        return
    for k in range(n):
        via_k = matrix[:, k][:, None] + matrix[k, :][None, :]
        if np.any(matrix > via_k + TOL):
            i, j = np.unravel_index(np.argmax(matrix - via_k), matrix.shape)
            raise ValueError(
                f"triangle inequality violated: d({i},{j}) > d({i},{k}) + d({k},{j})"
            )


class MetricSpace:
    """A finite point universe with a pairwise distance matrix.

    Construct through one of the classmethods; `kind` records the variant
    ("matrix", "euclidean" or "graph").  Instances are immutable after
    construction and safe to share across threads.
    """

    def __init__(self, matrix, kind, coords=None, validated=True):
        self.matrix = np.asarray(matrix, dtype=float)
        self.matrix.setflags(write=False)
        self.kind = kind
        self.coords = None if coords is None else np.asarray(coords, dtype=float)
        if self.coords is not None:
            self.coords.setflags(write=False)
        self.validated = validated

    @classmethod
    def from_matrix(cls, matrix, validate=True):
        """Explicit distance matrix.  `validate=False` skips the axiom check
        (used for the deliberately non-metric rounded matrices of the
        shortest-path approximation scheme)."""
        matrix = np.asarray(matrix, dtype=float)
        if validate:
            _check_axioms(matrix)
        return cls(matrix, "matrix", validated=validate)

    @classmethod
    def from_points(cls, coords):
        """Euclidean space over the given coordinate vectors (one row per point)."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        diff = coords[:, None, :] - coords[None, :, :]
        matrix = np.sqrt((diff * diff).sum(axis=-1))
        return cls(matrix, "euclidean", coords=coords)

    @classmethod
    def from_weighted_graph(cls, n, weighted_edges):
        """Metric induced by shortest paths in an undirected weighted graph.

        `weighted_edges` is an iterable of (i, j, w) with w >= 0.
        """
        matrix = all_pairs_shortest_paths(n, weighted_edges)
        space = cls(matrix, "graph")
        space.weighted_edges = tuple(
            (min(i, j), max(i, j), float(w)) for i, j, w in weighted_edges
        )
        return space

    def __len__(self):
        return self.matrix.shape[0]

    def check_point(self, a):
        if not (0 <= a < len(self)):
            raise InvalidPoint(f"point id {a} outside universe of size {len(self)}")

    def distance(self, a, b):
        self.check_point(a)
        self.check_point(b)
        return float(self.matrix[a, b])


def distance(space: MetricSpace, a: int, b: int) -> float:
    return space.distance(a, b)


def all_pairs_shortest_paths(n, weighted_edges) -> np.ndarray:
    """Floyd-Warshall closure of an undirected weighted graph.

    Raises DisconnectedMetric if some pair is unreachable.
    """
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for i, j, w in weighted_edges:
        if w < 0:
            raise ValueError("edge weights must be nonnegative")
        w = float(w)
        if w < dist[i, j]:
            dist[i, j] = w
            dist[j, i] = w
    for k in range(n):
        via_k = dist[:, k][:, None] + dist[k, :][None, :]
        np.minimum(dist, via_k, out=dist)
    if np.any(np.isinf(dist)):
        raise DisconnectedMetric("graph is not connected")
    return dist


def is_ptolemaic(space: MetricSpace, points) -> bool:
    """Check Ptolemy's inequality on every 4-subset of `points`.

    For points {a, b, c, d} the three products of "opposite" pairs are
    compared: each must not exceed the sum of the other two.  Fewer than
    four points is vacuously true.  Euclidean spaces always satisfy it.
    """
    points = list(points)
    for p in points:
        space.check_point(p)
    if len(points) < 4:
        return True
    d = space.matrix
    from itertools import combinations

    for a, b, c, d4 in combinations(points, 4):
        prods = (
            d[a, b] * d[c, d4],
            d[a, c] * d[b, d4],
            d[a, d4] * d[b, c],
        )
        total = sum(prods)
        for p in prods:
            if p > total - p + TOL:
                return False
    return True
