"""Shared random-instance builders and independent oracles.

The oracles deliberately avoid the library's solver code paths: dense
scenario scans use plain itertools products over `scenario_cost`, path
oracles enumerate simple paths directly, and the max-cut oracle iterates
bipartitions.  They are the reference values the implementations are
checked against.
"""

import itertools

import numpy as np
import pytest

from locrob import (
    Graph,
    LocUncInstance,
    MetricSpace,
    enumerate_family,
    scenario_cost,
)


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def random_connected_graph(rng, n, extra=2):
    """Random tree plus `extra` random chords."""
    edges = set()
    for v in range(1, n):
        u = int(rng.integers(0, v))
        edges.add((u, v))
    non_edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges
    ]
    for _ in range(extra):
        if not non_edges:
            break
        k = int(rng.integers(0, len(non_edges)))
        edges.add(non_edges.pop(k))
    return Graph(n, edges)


def random_space(rng, kind, n_points, dim=2):
    """Random metric space of the requested variant."""
    if kind == "euclidean":
        return MetricSpace.from_points(rng.random((n_points, dim)) * 10.0)
    if kind == "graph":
        wedges = []
        for v in range(1, n_points):
            u = int(rng.integers(0, v))
            wedges.append((u, v, float(rng.uniform(0.5, 3.0))))
        for _ in range(n_points // 2):
            i, j = rng.integers(0, n_points, size=2)
            if i != j:
                wedges.append((int(min(i, j)), int(max(i, j)), float(rng.uniform(0.5, 3.0))))
        return MetricSpace.from_weighted_graph(n_points, wedges)
    if kind == "matrix":
        # close a random weighted complete graph: always a metric
        pts = rng.random((n_points, 3)) * 5.0
        base = np.sqrt(((pts[:, None] - pts[None, :]) ** 2).sum(-1))
        jitter = rng.uniform(1.0, 1.5, size=base.shape)
        jitter = (jitter + jitter.T) / 2
        raw = base * jitter
        np.fill_diagonal(raw, 0.0)
        mat = raw.copy()
        for k in range(n_points):
            mat = np.minimum(mat, mat[:, k][:, None] + mat[k, :][None, :])
        return MetricSpace.from_matrix(mat)
    raise ValueError(kind)


def random_instance(rng, n=6, sigma=3, kind="euclidean", extra=2, family=None, n_points=None):
    graph = random_connected_graph(rng, n, extra)
    n_points = n_points or max(2 * n, 8)
    space = random_space(rng, kind, n_points)
    usets = []
    for _ in range(n):
        k = int(rng.integers(1, sigma + 1))
        usets.append(tuple(int(p) for p in rng.choice(n_points, size=k, replace=False)))
    return LocUncInstance(graph, space, usets, family)


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def oracle_eval(inst, edges):
    """Dense scan over all joint locations of the touched vertices."""
    edges = [tuple(e) for e in edges]
    touched = sorted({v for e in edges for v in e})
    best = 0.0 if not edges else -np.inf
    base = [0] * inst.graph.n
    for combo in itertools.product(*[range(len(inst.usets[v])) for v in touched]):
        scen = list(base)
        for v, k in zip(touched, combo):
            scen[v] = k
        best = max(best, scenario_cost(inst, scen, edges))
    return float(best) if edges else 0.0


def oracle_min_over_family(inst, caps=None):
    """Exhaustive min over the family of the dense adversarial value,
    vectorized over scenarios for speed."""
    from locrob import DEFAULT_CAPS

    caps = caps or DEFAULT_CAPS
    members = list(enumerate_family(inst.family, inst.graph, caps))
    n = inst.graph.n
    sizes = [len(u) for u in inst.usets]
    grids = np.indices(sizes).reshape(n, -1)
    d = inst.space.matrix
    per_edge = {}
    for e in inst.graph.edges:
        i, j = e
        pts_i = np.asarray(inst.usets[i])[grids[i]]
        pts_j = np.asarray(inst.usets[j])[grids[j]]
        per_edge[e] = d[pts_i, pts_j]
    best = None
    best_edges = None
    for edges in members:
        if edges:
            worst = float(sum(per_edge[e] for e in edges).max())
        else:
            worst = 0.0
        if best is None or worst < best - 1e-12:
            best = worst
            best_edges = edges
    return best_edges, best


def oracle_maxcut(graph):
    best = 0
    for mask in range(1 << graph.n):
        cut = sum(1 for i, j in graph.edges if (mask >> i & 1) != (mask >> j & 1))
        best = max(best, cut)
    return best


def oracle_simple_paths(graph, s, t):
    """All simple s-t paths as vertex tuples."""
    out = []
    path = [s]
    seen = {s}

    def rec(v):
        if v == t:
            out.append(tuple(path))
            return
        for w in graph.adj[v]:
            if w not in seen:
                seen.add(w)
                path.append(w)
                rec(w)
                path.pop()
                seen.remove(w)

    rec(s)
    return out


def oracle_shortest_path_length(n, wedges, a, b):
    """Min over all simple paths by explicit enumeration."""
    adj = {}
    for i, j, w in wedges:
        adj.setdefault(i, []).append((j, w))
        adj.setdefault(j, []).append((i, w))
    best = [np.inf]
    seen = {a}

    def rec(v, acc):
        if v == b:
            best[0] = min(best[0], acc)
            return
        for w, wt in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                rec(w, acc + wt)
                seen.remove(w)

    rec(a, 0.0)
    return best[0]
