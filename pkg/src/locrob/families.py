"""Deterministic solvers and exhaustive enumerators for the supported
feasible families.

`solve_deterministic` minimizes a nonnegative edge-weight sum over the
family exactly: Dijkstra for s-t paths, Kruskal for spanning trees, the
Dreyfus-Wagner dynamic program for Steiner trees, open-site enumeration
with per-client argmin for p-median, and the Hungarian method for
assignments.  `enumerate_family` streams every feasible edge subset once,
in a deterministic order, and backs all brute-force oracles; hard size
caps guard it against accidental blow-ups.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import CapExceeded, Infeasible
from .instance import (
    Assignment,
    ExplicitList,
    Graph,
    PMedian,
    STPath,
    SpanningTree,
    SteinerTree,
    normalize_edge,
    normalize_edges,
)

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class EnumerationCaps:
    """Size limits for enumeration and table-based solvers."""

    max_edges: int = 20              # paths / trees enumeration
    steiner_max_free: int = 16       # non-terminal vertices in Steiner enumeration
    steiner_max_terminals: int = 12  # Dreyfus-Wagner table bound
    pmedian_max_sites: int = 12
    pmedian_max_choices: int = 2_000_000
    pmedian_solve_max_subsets: int = 1_000_000
    bruteforce_max_scenarios: int = 10_000_000


DEFAULT_CAPS = EnumerationCaps()


@dataclass(frozen=True)
class FamilyStats:
    """Structural classification of the subgraph induced by an edge subset."""

    max_degree: int
    vertex_count: int
    is_matching: bool
    is_path: bool
    is_cycle: bool
    is_tree: bool
    is_star: bool
    is_clique: bool


def family_stats(edges) -> FamilyStats:
    edges = normalize_edges(edges)
    vertices = sorted({v for e in edges for v in e})
    deg = {v: 0 for v in vertices}
    adj = {v: [] for v in vertices}
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
        adj[i].append(j)
        adj[j].append(i)
    nv, ne = len(vertices), len(edges)
    max_degree = max(deg.values(), default=0)

    connected = False
    if vertices:
        seen = {vertices[0]}
        stack = [vertices[0]]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        connected = len(seen) == nv

    is_tree = connected and ne == nv - 1
    return FamilyStats(
        max_degree=max_degree,
        vertex_count=nv,
        is_matching=max_degree <= 1,
        is_path=is_tree and max_degree <= 2,
        is_cycle=connected and ne == nv and max_degree == 2 and nv >= 3,
        is_tree=is_tree,
        is_star=is_tree and (nv <= 2 or max_degree == nv - 1),
        is_clique=nv >= 2 and ne == comb(nv, 2),
    )


def _edge_weight(weights, i, j):
    w = weights[normalize_edge(i, j)]
    if w < 0:
        raise ValueError("edge weights must be nonnegative")
    return float(w)


# ---------------------------------------------------------------------------
# Deterministic solvers
# ---------------------------------------------------------------------------


def _dijkstra_path(graph: Graph, weights, s, t):
    dist = {s: 0.0}
    parent = {s: None}
    heap = [(0.0, s)]
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v == t:
            break
        for w in graph.adj[v]:
            nd = d + _edge_weight(weights, v, w)
            if w not in dist or nd < dist[w] - WEIGHT_TOL:
                dist[w] = nd
                parent[w] = v
                heapq.heappush(heap, (nd, w))
    if t not in done:
        raise Infeasible(f"no path from {s} to {t}")
    path = [t]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    path.reverse()
    return normalize_edges(zip(path, path[1:]))


def _kruskal(graph: Graph, weights):
    parent = list(range(graph.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    chosen = []
    for w, e in sorted((_edge_weight(weights, *e), e) for e in graph.edges):
        ri, rj = find(e[0]), find(e[1])
        if ri != rj:
            parent[ri] = rj
            chosen.append(e)
    if len(chosen) != graph.n - 1:
        raise Infeasible("graph is not connected")
    return tuple(sorted(chosen))


def _weighted_closure(graph: Graph, weights):
    """All-pairs shortest paths under the given weights, with next-hop
    matrix for path reconstruction."""
    n = graph.n
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    nxt = -np.ones((n, n), dtype=int)
    np.fill_diagonal(nxt, np.arange(n))
    for i, j in graph.edges:
        w = _edge_weight(weights, i, j)
        if w < dist[i, j]:
            dist[i, j] = dist[j, i] = w
            nxt[i, j] = j
            nxt[j, i] = i
    for k in range(n):
        for i in range(n):
            dik = dist[i, k]
            if not np.isfinite(dik):
                continue
            for j in range(n):
                nd = dik + dist[k, j]
                if nd < dist[i, j] - WEIGHT_TOL:
                    dist[i, j] = nd
                    nxt[i, j] = nxt[i, k]
    return dist, nxt


def _closure_path_edges(nxt, u, v):
    edges = []
    while u != v:
        w = int(nxt[u, v])
        if w < 0:
            raise Infeasible(f"no path between {u} and {v}")
        edges.append(normalize_edge(u, w))
        u = w
    return edges


def _prune_to_steiner_tree(edges, terminals, weights):
    """Drop cycles (keep a light spanning tree of the union) and then trim
    non-terminal leaves."""
    edges = set(normalize_edges(edges))
    vertices = {v for e in edges for v in e}
    # Kruskal on the union keeps it connected and acyclic.
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for w, e in sorted((_edge_weight(weights, *e), e) for e in edges):
        ri, rj = find(e[0]), find(e[1])
        if ri != rj:
            parent[ri] = rj
            tree.append(e)
    tree = set(tree)
    terminals = set(terminals)
    changed = True
    while changed:
        changed = False
        deg = {}
        for i, j in tree:
            deg[i] = deg.get(i, 0) + 1
            deg[j] = deg.get(j, 0) + 1
        for e in sorted(tree):
            for v in e:
                if deg.get(v) == 1 and v not in terminals:
                    tree.discard(e)
                    changed = True
                    break
            if changed:
                break
    return tuple(sorted(tree))


def _dreyfus_wagner(graph: Graph, weights, terminals, caps: EnumerationCaps):
    terminals = tuple(sorted(set(terminals)))
    k = len(terminals)
    if k > caps.steiner_max_terminals:
        raise CapExceeded(f"{k} terminals exceed Dreyfus-Wagner cap")
    if k == 1:
        return ()
    dist, nxt = _weighted_closure(graph, weights)
    if not np.isfinite(dist[np.ix_(terminals, terminals)]).all():
        raise Infeasible("terminals are not mutually connected")
    n = graph.n
    full = (1 << k) - 1
    INF = float("inf")
    # dp[mask][v]: cheapest tree spanning {terminals in mask} + v
    dp = [[INF] * n for _ in range(1 << k)]
    choice = [[None] * n for _ in range(1 << k)]
    for ti, t in enumerate(terminals):
        mask = 1 << ti
        for v in range(n):
            dp[mask][v] = dist[t, v]
            choice[mask][v] = ("base", t)
    for mask in range(1, full + 1):
        if mask & (mask - 1) == 0:
            continue
        # merge two sub-trees at u, then attach u to v by a shortest path
        merged = [INF] * n
        merged_choice = [None] * n
        sub = (mask - 1) & mask
        while sub:
            rest = mask ^ sub
            if sub < rest:  # each unordered split once
                for u in range(n):
                    val = dp[sub][u] + dp[rest][u]
                    if val < merged[u] - WEIGHT_TOL:
                        merged[u] = val
                        merged_choice[u] = (sub, rest)
            sub = (sub - 1) & mask
        for v in range(n):
            best, arg = INF, None
            for u in range(n):
                val = merged[u] + dist[u, v]
                if val < best - WEIGHT_TOL:
                    best, arg = val, u
            dp[mask][v] = best
            choice[mask][v] = ("merge", arg, merged_choice[arg])

    root = terminals[0]
    edges = []
    stack = [(full, root)]
    while stack:
        mask, v = stack.pop()
        kind = choice[mask][v]
        if kind[0] == "base":
            edges.extend(_closure_path_edges(nxt, kind[1], v))
        else:
            _, u, (sub, rest) = kind
            edges.extend(_closure_path_edges(nxt, u, v))
            stack.append((sub, u))
            stack.append((rest, u))
    tree = _prune_to_steiner_tree(edges, terminals, weights)
    got = sum(_edge_weight(weights, *e) for e in tree)
    if abs(got - dp[full][root]) > 1e-6 * max(1.0, abs(got)):
        raise RuntimeError("Steiner reconstruction does not match table value")
    return tree


def _solve_pmedian(graph: Graph, weights, fam: PMedian, caps: EnumerationCaps):
    if comb(len(fam.sites), fam.p) > caps.pmedian_solve_max_subsets:
        raise CapExceeded("too many site subsets")
    site_set = set(fam.sites)
    candidates = {
        i: sorted(j for j in graph.adj[i] if j in site_set) for i in fam.clients
    }
    if any(not c for c in candidates.values()):
        raise Infeasible("a client has no adjacent site")
    best = None
    for open_sites in itertools.combinations(fam.sites, fam.p):
        open_set = set(open_sites)
        total = 0.0
        edges = []
        ok = True
        for i in fam.clients:
            cand = [j for j in candidates[i] if j in open_set]
            if not cand:
                ok = False
                break
            j = min(cand, key=lambda j: (_edge_weight(weights, i, j), j))
            total += _edge_weight(weights, i, j)
            edges.append(normalize_edge(i, j))
        if ok and (best is None or total < best[0] - WEIGHT_TOL):
            best = (total, tuple(sorted(set(edges))))
    if best is None:
        raise Infeasible("no feasible site subset")
    return best[1]


def _solve_assignment(graph: Graph, weights, fam: Assignment):
    from scipy.optimize import linear_sum_assignment

    left, right = fam.left, fam.right
    cost = np.full((len(left), len(right)), np.inf)
    for a, i in enumerate(left):
        for b, j in enumerate(right):
            if graph.has_edge(i, j):
                cost[a, b] = _edge_weight(weights, i, j)
    try:
        rows, cols = linear_sum_assignment(cost)
    except ValueError as exc:
        raise Infeasible("no perfect matching") from exc
    if not np.isfinite(cost[rows, cols]).all():
        raise Infeasible("no perfect matching")
    return tuple(sorted(normalize_edge(left[a], right[b]) for a, b in zip(rows, cols)))


def solve_deterministic(family, graph: Graph, weights, caps: EnumerationCaps = DEFAULT_CAPS):
    """Exact minimum-weight member of the family under nonnegative weights."""
    if isinstance(family, STPath):
        return _dijkstra_path(graph, weights, family.s, family.t)
    if isinstance(family, SpanningTree):
        return _kruskal(graph, weights)
    if isinstance(family, SteinerTree):
        return _dreyfus_wagner(graph, weights, family.terminals, caps)
    if isinstance(family, PMedian):
        return _solve_pmedian(graph, weights, family, caps)
    if isinstance(family, Assignment):
        return _solve_assignment(graph, weights, family)
    if isinstance(family, ExplicitList):
        if not family.subsets:
            raise Infeasible("empty explicit family")
        best = None
        for sub in family.subsets:
            total = sum(_edge_weight(weights, *e) for e in sub)
            if best is None or total < best[0] - WEIGHT_TOL:
                best = (total, sub)
        return best[1]
    raise TypeError(f"unknown family descriptor {family!r}")


# ---------------------------------------------------------------------------
# Exhaustive enumeration
# ---------------------------------------------------------------------------


def _enumerate_st_paths(graph: Graph, s, t):
    path = [s]
    on_path = {s}

    def extend(v):
        if v == t:
            yield normalize_edges(zip(path, path[1:]))
            return
        for w in graph.adj[v]:
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                yield from extend(w)
                path.pop()
                on_path.remove(w)

    yield from extend(s)


def _spanning_trees_of(vertices, edges):
    """All spanning trees of the subgraph (vertices, edges), by edge-subset scan."""
    vertices = sorted(vertices)
    index = {v: k for k, v in enumerate(vertices)}
    need = len(vertices) - 1
    if need < 0 or len(edges) < need:
        return
    if need == 0:
        yield ()
        return
    for combo in itertools.combinations(sorted(edges), need):
        parent = list(range(len(vertices)))

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        ok = True
        for i, j in combo:
            ri, rj = find(index[i]), find(index[j])
            if ri == rj:
                ok = False
                break
            parent[ri] = rj
        if ok:
            yield combo


def enumerate_family(family, graph: Graph, caps: EnumerationCaps = DEFAULT_CAPS):
    """Yield every feasible edge subset exactly once, deterministically
    (lexicographic over sorted edge tuples within each generation scheme)."""
    if isinstance(family, ExplicitList):
        seen = set()
        for sub in family.subsets:
            if sub not in seen:
                seen.add(sub)
                yield sub
        return

    if isinstance(family, (STPath, SpanningTree, SteinerTree)):
        if graph.m > caps.max_edges:
            raise CapExceeded(f"{graph.m} edges exceed enumeration cap {caps.max_edges}")

    if isinstance(family, STPath):
        yield from _enumerate_st_paths(graph, family.s, family.t)
    elif isinstance(family, SpanningTree):
        yield from _spanning_trees_of(range(graph.n), graph.edges)
    elif isinstance(family, SteinerTree):
        terminals = set(family.terminals)
        free = sorted(set(range(graph.n)) - terminals)
        if len(free) > caps.steiner_max_free:
            raise CapExceeded("too many optional vertices for Steiner enumeration")
        for mask in range(1 << len(free)):
            used = terminals | {free[b] for b in range(len(free)) if mask >> b & 1}
            sub_edges = [e for e in graph.edges if e[0] in used and e[1] in used]
            for tree in _spanning_trees_of(used, sub_edges):
                deg = {}
                for i, j in tree:
                    deg[i] = deg.get(i, 0) + 1
                    deg[j] = deg.get(j, 0) + 1
                if len(terminals) == 1 and not tree:
                    yield tree
                elif all(deg.get(v, 0) != 1 or v in terminals for v in used):
                    if all(deg.get(v, 0) > 0 for v in used):
                        yield tree
    elif isinstance(family, PMedian):
        if len(family.sites) > caps.pmedian_max_sites:
            raise CapExceeded("too many sites for p-median enumeration")
        site_set = set(family.sites)
        candidates = [
            sorted(j for j in graph.adj[i] if j in site_set) for i in family.clients
        ]
        if any(not c for c in candidates):
            raise Infeasible("a client has no adjacent site")
        count = 1
        for c in candidates:
            count *= len(c)
            if count > caps.pmedian_max_choices:
                raise CapExceeded("too many p-median assignments")
        for combo in itertools.product(*candidates):
            if len(set(combo)) <= family.p:
                yield tuple(
                    sorted({normalize_edge(i, j) for i, j in zip(family.clients, combo)})
                )
    elif isinstance(family, Assignment):
        for perm in itertools.permutations(family.right):
            if all(graph.has_edge(i, j) for i, j in zip(family.left, perm)):
                yield tuple(
                    sorted(normalize_edge(i, j) for i, j in zip(family.left, perm))
                )
    else:
        raise TypeError(f"unknown family descriptor {family!r}")
