"""Experiment-instance generators.

Randomness comes from numpy's PCG64 bit generator seeded through
SeedSequence; batch drivers spawn one child sequence per trial with
SeedSequence((seed, trial)), so every instance is reproducible from
(seed, trial) alone and solver choices never consume generator state.
"""

from __future__ import annotations

from math import comb, cos, pi, sin
from typing import List, Tuple

import numpy as np

from ..errors import InvalidSize
from ..instance import Graph, LocUncInstance, PMedian, SteinerTree
from ..metric import MetricSpace

# 7-vertex / 9-edge base layout of the small Steiner benchmark; terminals
# are the lower-left, middle-right and upper-left vertices.
_BASE_COORDS = [
    (2.75, 0.25),
    (5.25, 0.25),
    (1.5, 2.5),
    (4.0, 2.5),
    (6.5, 2.5),
    (2.75, 4.75),
    (5.25, 4.75),
]
_BASE_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6), (4, 6), (5, 6)]
_BASE_TERMINALS = [0, 4, 5]
_LAYER_SHIFT = 4.5


def rng_for(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def layered_steiner_graph(layers: int):
    """Stack copies of the base layout, each sharing the previous top row.

    Returns (coords, edges, terminals); layers >= 1.
    """
    if layers < 1:
        raise InvalidSize("need at least one layer")
    coords = list(_BASE_COORDS)
    edges = list(_BASE_EDGES)
    terminals = list(_BASE_TERMINALS)
    top = (5, 6)
    for layer in range(2, layers + 1):
        shift = _LAYER_SHIFT * (layer - 1)
        base_of = len(coords)
        for k in range(2, 7):  # copies of the five non-bottom-row vertices
            x, y = _BASE_COORDS[k]
            coords.append((x, y + shift))
        ids = {0: top[0], 1: top[1]}
        for k in range(2, 7):
            ids[k] = base_of + (k - 2)
        for a, b in _BASE_EDGES:
            if (a, b) == (0, 1):
                continue  # shared row
            edges.append((ids[a], ids[b]))
        terminals += [ids[4], ids[5]]
        top = (ids[5], ids[6])
    return coords, edges, terminals


def gen_layered_steiner(layers: int, delta: float, sigma: int, seed) -> LocUncInstance:
    """Steiner instance with circular location sets around each vertex.

    Each vertex gets `sigma` points evenly spaced on a circle whose radius
    is drawn uniformly from [0, delta * mean pairwise vertex distance];
    delta = 0 collapses every set to a singleton.
    """
    if sigma < 1:
        raise InvalidSize("sigma must be >= 1")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    coords, edges, terminals = layered_steiner_graph(layers)
    base = np.array(coords)
    n = len(base)
    diff = base[:, None, :] - base[None, :, :]
    pair = np.sqrt((diff * diff).sum(-1))
    mean_dist = pair[np.triu_indices(n, 1)].mean()

    rng = rng_for(seed)
    points: List[Tuple[float, float]] = []
    usets = []
    for i in range(n):
        radius = rng.uniform(0.0, delta * mean_dist)
        mine = []
        for k in range(1, sigma + 1):
            angle = 2.0 * pi * k / sigma
            pt = (base[i, 0] + radius * cos(angle), base[i, 1] + radius * sin(angle))
            if pt in [points[q] for q in mine]:
                continue  # radius 0 collapses the circle
            mine.append(len(points))
            points.append(pt)
        usets.append(tuple(mine))
    space = MetricSpace.from_points(points)
    graph = Graph(n, edges)
    return LocUncInstance(graph, space, usets, SteinerTree(terminals))


# ---------------------------------------------------------------------------
# Random planar road networks
# ---------------------------------------------------------------------------


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def segments_cross(p1, p2, p3, p4) -> bool:
    """Proper straight-line crossing test; sharing an endpoint is allowed."""
    if len({tuple(p1), tuple(p2)} & {tuple(p3), tuple(p4)}) > 0:
        return False
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True

    def on_seg(a, b, c):
        return (
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    for (a, b, c, d) in ((p3, p4, p1, d1), (p3, p4, p2, d2), (p1, p2, p3, d3), (p1, p2, p4, d4)):
        if d == 0 and on_seg(a, b, c):
            return True
    return False


def _euclidean_mst(pts) -> List[Tuple[int, int]]:
    n = len(pts)
    cand = sorted(
        (float(np.hypot(*(pts[i] - pts[j]))), (i, j))
        for i in range(n)
        for j in range(i + 1, n)
    )
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for _, (i, j) in cand:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            tree.append((i, j))
            if len(tree) == n - 1:
                break
    return tree


def gen_road_graph(n: int, m: int, rng) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    """Connected straight-line planar graph: a Euclidean spanning tree plus
    extra edges sampled with probability proportional to inverse squared
    length, rejecting any candidate that crosses an existing edge."""
    if m < n - 1:
        raise InvalidSize("need at least n-1 edges for connectivity")
    if m > comb(n, 2):
        raise InvalidSize("too many edges for a simple graph")
    pts = rng.random((n, 2))
    edges = _euclidean_mst(pts)
    existing = set(edges)
    cands = [
        (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in existing
    ]
    while len(edges) < m:
        if not cands:
            raise InvalidSize("ran out of non-crossing candidate edges")
        weights = np.array(
            [1.0 / max(np.hypot(*(pts[i] - pts[j])) ** 2, 1e-12) for i, j in cands]
        )
        pick = int(rng.choice(len(cands), p=weights / weights.sum()))
        i, j = cands.pop(pick)
        if any(segments_cross(pts[i], pts[j], pts[a], pts[b]) for a, b in edges):
            continue
        edges.append((i, j))
    return pts, sorted(edges)


def gen_roadnet(
    n: int, m: int, n_clients: int, n_sites: int, p: int, sigma: int, seed
):
    """Strategic facility-location instance on a random road network.

    The road network supplies the metric (shortest paths over Euclidean
    edge lengths); the problem graph is the complete client/site bipartite
    graph.  Each chosen vertex's location set holds the `sigma` road
    vertices nearest to it (itself included).

    Returns (instance, positions, road_edges).
    """
    if n_clients + n_sites > n:
        raise InvalidSize("clients + sites exceed vertex count")
    if n_clients < 1 or n_sites < 1:
        raise InvalidSize("need at least one client and one site")
    if sigma < 1 or sigma > n:
        raise InvalidSize("sigma must be in [1, n]")
    rng = rng_for(seed)
    pts, road_edges = gen_road_graph(n, m, rng)
    wedges = [
        (i, j, float(np.hypot(*(pts[i] - pts[j])))) for i, j in road_edges
    ]
    space = MetricSpace.from_weighted_graph(n, wedges)

    order = rng.permutation(n)
    client_vs = sorted(int(v) for v in order[:n_clients])
    site_vs = sorted(int(v) for v in order[n_clients : n_clients + n_sites])

    def nearest(v):
        byd = sorted(range(n), key=lambda u: (space.matrix[v, u], u))
        return tuple(byd[:sigma])

    chosen = client_vs + site_vs
    usets = [nearest(v) for v in chosen]
    clients = tuple(range(n_clients))
    sites = tuple(range(n_clients, n_clients + n_sites))
    edges = [(i, j) for i in clients for j in sites]
    graph = Graph(n_clients + n_sites, edges)
    inst = LocUncInstance(graph, space, usets, PMedian(clients, sites, p))
    return inst, pts, road_edges
