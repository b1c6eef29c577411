"""Problem instances: a simple graph, per-vertex finite location sets over a
metric space, and a feasible-family descriptor.

A *scenario* is one joint location choice, stored as a tuple of indices
(index k for vertex i means the k-th entry of that vertex's location list).
An edge subset is a tuple/set of canonical `(i, j)` pairs with `i < j`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidPoint
from .metric import TOL, MetricSpace

Edge = Tuple[int, int]


def normalize_edge(i, j) -> Edge:
    if i == j:
        raise ValueError(f"loop edge ({i},{j}) not allowed")
    return (i, j) if i < j else (j, i)


def normalize_edges(edges) -> Tuple[Edge, ...]:
    """Canonical sorted, deduplicated edge tuple."""
    return tuple(sorted({normalize_edge(i, j) for i, j in edges}))


class Graph:
    """Simple undirected graph on vertices 0..n-1 with no isolated vertices."""

    def __init__(self, n: int, edges: Iterable[Edge]):
        self.n = int(n)
        self.edges = normalize_edges(edges)
        touched = set()
        for i, j in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) outside vertex range")
            touched.add(i)
            touched.add(j)
        if touched != set(range(self.n)):
            missing = sorted(set(range(self.n)) - touched)
            raise ValueError(f"isolated vertices not allowed: {missing}")
        self.adj = {v: [] for v in range(self.n)}
        for i, j in self.edges:
            self.adj[i].append(j)
            self.adj[j].append(i)
        for v in self.adj:
            self.adj[v].sort()
        self.edge_index = {e: k for k, e in enumerate(self.edges)}

    @property
    def m(self):
        return len(self.edges)

    def has_edge(self, i, j):
        return normalize_edge(i, j) in self.edge_index

    def degree(self, v):
        return len(self.adj[v])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# Feasible-family descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class STPath:
    s: int
    t: int


@dataclass(frozen=True)
class SpanningTree:
    pass


@dataclass(frozen=True)
class SteinerTree:
    terminals: Tuple[int, ...]

    def __init__(self, terminals):
        object.__setattr__(self, "terminals", tuple(sorted(set(terminals))))


@dataclass(frozen=True)
class PMedian:
    clients: Tuple[int, ...]
    sites: Tuple[int, ...]
    p: int

    def __init__(self, clients, sites, p):
        object.__setattr__(self, "clients", tuple(sorted(set(clients))))
        object.__setattr__(self, "sites", tuple(sorted(set(sites))))
        object.__setattr__(self, "p", int(p))


@dataclass(frozen=True)
class Assignment:
    left: Tuple[int, ...]
    right: Tuple[int, ...]

    def __init__(self, left, right):
        object.__setattr__(self, "left", tuple(sorted(set(left))))
        object.__setattr__(self, "right", tuple(sorted(set(right))))


@dataclass(frozen=True)
class ExplicitList:
    subsets: Tuple[Tuple[Edge, ...], ...]

    def __init__(self, subsets):
        object.__setattr__(
            self, "subsets", tuple(normalize_edges(s) for s in subsets)
        )


FamilyDescriptor = (STPath, SpanningTree, SteinerTree, PMedian, Assignment, ExplicitList)


def validate_family(family, graph: Graph) -> None:
    """Check that the descriptor's data is consistent with the graph."""
    if isinstance(family, STPath):
        if family.s == family.t:
            raise ValueError("path endpoints must differ")
        for v in (family.s, family.t):
            if not 0 <= v < graph.n:
                raise ValueError(f"endpoint {v} outside vertex range")
    elif isinstance(family, SpanningTree):
        pass
    elif isinstance(family, SteinerTree):
        if not family.terminals:
            raise ValueError("terminal set is empty")
        for v in family.terminals:
            if not 0 <= v < graph.n:
                raise ValueError(f"terminal {v} outside vertex range")
    elif isinstance(family, PMedian):
        if set(family.clients) & set(family.sites):
            raise ValueError("client and site sets must be disjoint")
        if not (1 <= family.p <= len(family.sites)):
            raise ValueError("p must be between 1 and the number of sites")
        for v in family.clients + family.sites:
            if not 0 <= v < graph.n:
                raise ValueError(f"vertex {v} outside vertex range")
    elif isinstance(family, Assignment):
        if len(family.left) != len(family.right):
            raise ValueError("assignment sides must have equal size")
        if set(family.left) & set(family.right):
            raise ValueError("assignment sides must be disjoint")
    elif isinstance(family, ExplicitList):
        for sub in family.subsets:
            for e in sub:
                if e not in graph.edge_index:
                    raise ValueError(f"edge {e} not in graph")
    else:
        raise TypeError(f"unknown family descriptor {family!r}")


# ---------------------------------------------------------------------------
# The instance itself
# ---------------------------------------------------------------------------


class LocUncInstance:
    """Graph + metric space + per-vertex location sets + feasible family.

    Location sets are ordered lists of point ids; all ties in argmin/argmax
    operations are broken by the lowest list index so runs are
    deterministic.  The per-pair worst-case distance cache is guarded by a
    lock so concurrent readers are safe.
    """

    def __init__(self, graph: Graph, space: MetricSpace, usets, family=None):
        self.graph = graph
        self.space = space
        self.usets = tuple(tuple(u) for u in usets)
        if len(self.usets) != graph.n:
            raise ValueError("need one location set per vertex")
        for i, u in enumerate(self.usets):
            if not u:
                raise ValueError(f"location set of vertex {i} is empty")
            for p in u:
                if not (0 <= p < len(space)):
                    raise InvalidPoint(f"vertex {i}: point id {p} out of range")
        self.family = family
        if family is not None:
            validate_family(family, graph)
        self.sigma = max(len(u) for u in self.usets)
        self._dmax = {}
        self._dmax_lock = threading.Lock()

    def scenario_points(self, scenario) -> Tuple[int, ...]:
        return tuple(self.usets[i][scenario[i]] for i in range(self.graph.n))

    def check_scenario(self, scenario) -> None:
        if len(scenario) != self.graph.n:
            raise ValueError("scenario length must equal vertex count")
        for i, k in enumerate(scenario):
            if not 0 <= k < len(self.usets[i]):
                raise ValueError(f"vertex {i}: location index {k} out of range")


def scenario_cost(inst: LocUncInstance, scenario, edges) -> float:
    """Total length of `edges` when every vertex sits at its scenario location."""
    inst.check_scenario(scenario)
    d = inst.space.matrix
    total = 0.0
    for i, j in edges:
        total += d[inst.usets[i][scenario[i]], inst.usets[j][scenario[j]]]
    return float(total)


def max_pair_distance(inst: LocUncInstance, i: int, j: int) -> float:
    """Worst-case distance between the location sets of two vertices (cached)."""
    if i == j:
        raise ValueError("vertices must differ")
    key = (i, j) if i < j else (j, i)
    with inst._dmax_lock:
        val = inst._dmax.get(key)
    if val is None:
        sub = inst.space.matrix[np.ix_(inst.usets[key[0]], inst.usets[key[1]])]
        val = float(sub.max())
        with inst._dmax_lock:
            inst._dmax[key] = val
    return val


def pessimistic_cost(inst: LocUncInstance, edges) -> float:
    """Sum over edges of the pairwise worst-case distance."""
    return float(sum(max_pair_distance(inst, i, j) for i, j in edges))


def worst_case_metric(inst: LocUncInstance) -> MetricSpace:
    """Explicit metric over the vertices whose distances are the pairwise
    worst-case values.  The triangle inequality carries over from the
    underlying metric, so validation must pass."""
    n = inst.graph.n
    mat = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            mat[i, j] = mat[j, i] = max_pair_distance(inst, i, j)
    return MetricSpace.from_matrix(mat, validate=True)


def barycenter(inst: LocUncInstance, i: int) -> int:
    """Location of vertex i minimizing the summed distance to its own set.

    Ties are broken by the smallest point id.
    """
    uset = inst.usets[i]
    sub = inst.space.matrix[np.ix_(uset, uset)]
    sums = sub.sum(axis=1)
    best = None
    for k, p in enumerate(uset):
        if best is None or sums[k] < best[0] - TOL or (
            abs(sums[k] - best[0]) <= TOL and p < best[1]
        ):
            best = (sums[k], p)
    return best[1]


def barycenter_scenario(inst: LocUncInstance) -> Tuple[int, ...]:
    """Scenario placing every vertex at its barycenter (first occurrence
    when the point appears several times in the list)."""
    out = []
    for i in range(inst.graph.n):
        out.append(inst.usets[i].index(barycenter(inst, i)))
    return tuple(out)


def uset_diameter(inst: LocUncInstance, i: int):
    """Largest intra-set distance of vertex i's location set, with one
    attaining point pair (lowest indices on ties)."""
    uset = inst.usets[i]
    best_val = 0.0
    best_pair = (uset[0], uset[0])
    d = inst.space.matrix
    for a in range(len(uset)):
        for b in range(a + 1, len(uset)):
            val = d[uset[a], uset[b]]
            if val > best_val + TOL:
                best_val = float(val)
                best_pair = (uset[a], uset[b])
    return best_val, best_pair
