"""Polynomial heuristics with certified worst-case ratios.

Two heuristics reduce the min-max problem to a deterministic one: one
prices every edge at the distance between the endpoint barycenters, the
other at the pairwise worst-case distance.  For the latter, the ratio
between the pessimistic cost and the true adversarial cost is bounded by
constants that depend on the structure of the chosen subgraph and on
whether the metric satisfies Ptolemy's inequality; `certify_ratio` checks
the applicable bound numerically.  The tightness generators build the
small instances on which each structural bound is attained exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidSize
from .families import DEFAULT_CAPS, EnumerationCaps, FamilyStats, family_stats, solve_deterministic
from .instance import (
    ExplicitList,
    Graph,
    LocUncInstance,
    STPath,
    barycenter,
    max_pair_distance,
    normalize_edges,
    pessimistic_cost,
    worst_case_metric,
)
from .metric import MetricSpace, is_ptolemaic
from .worst_case import worst_case_cost

RATIO_TOL = 1e-9

ANY_METRIC = "any"
PTOLEMAIC = "ptolemaic"


@dataclass(frozen=True)
class RatioBound:
    """A proven upper bound on pessimistic_cost / worst_case_cost."""

    value: float
    hypothesis: str  # ANY_METRIC or PTOLEMAIC
    structure: str


def solve_with_barycenters(inst: LocUncInstance, caps: EnumerationCaps = DEFAULT_CAPS):
    """Deterministic counterpart with every vertex pinned to its barycenter.

    No ratio guarantee: the returned subset can be arbitrarily worse than
    the optimum.
    """
    centers = [barycenter(inst, i) for i in range(inst.graph.n)]
    d = inst.space.matrix
    weights = {e: float(d[centers[e[0]], centers[e[1]]]) for e in inst.graph.edges}
    return solve_deterministic(inst.family, inst.graph, weights, caps)


def solve_with_worst_distances(inst: LocUncInstance, caps: EnumerationCaps = DEFAULT_CAPS):
    """Deterministic counterpart priced at pairwise worst-case distances.

    The result's true cost is at most the applicable structural bound times
    the optimum (the deterministic sub-solvers here are exact).
    """
    weights = {e: max_pair_distance(inst, *e) for e in inst.graph.edges}
    return solve_deterministic(inst.family, inst.graph, weights, caps)


def space_is_ptolemaic(inst: LocUncInstance) -> bool:
    """Ptolemy check over the union of all location points (Euclidean
    spaces qualify without enumeration)."""
    if inst.space.kind == "euclidean":
        return True
    points = sorted({p for u in inst.usets for p in u})
    return is_ptolemaic(inst.space, points)


def applicable_bound(stats: FamilyStats, ptolemaic: bool) -> RatioBound:
    """Tightest proven bound consistent with the structure flags.

    Candidates: matching 1; path/long cycle 2; 3-cycle 3/2; clique 2;
    star 3 (2 Ptolemaic); tree 6 (4 Ptolemaic); max degree; general 9
    (4 Ptolemaic).  The minimum applies.
    """
    hyp = PTOLEMAIC if ptolemaic else ANY_METRIC
    cands = [RatioBound(4.0 if ptolemaic else 9.0, hyp, "general")]
    if stats.max_degree >= 1:
        cands.append(RatioBound(float(stats.max_degree), ANY_METRIC, "max_degree"))
    if stats.is_matching:
        cands.append(RatioBound(1.0, ANY_METRIC, "matching"))
    if stats.is_path:
        cands.append(RatioBound(2.0, ANY_METRIC, "path"))
    if stats.is_cycle:
        if stats.vertex_count == 3:
            cands.append(RatioBound(1.5, ANY_METRIC, "triangle"))
        else:
            cands.append(RatioBound(2.0, ANY_METRIC, "cycle"))
    if stats.is_clique:
        cands.append(RatioBound(2.0, ANY_METRIC, "clique"))
    if stats.is_star:
        cands.append(RatioBound(2.0 if ptolemaic else 3.0, hyp, "star"))
    if stats.is_tree:
        cands.append(RatioBound(4.0 if ptolemaic else 6.0, hyp, "tree"))
    return min(cands, key=lambda b: b.value)


@dataclass
class CertifyResult:
    observed: float
    bound: RatioBound
    ok: bool


def certify_ratio(inst: LocUncInstance, edges, caps: EnumerationCaps = DEFAULT_CAPS) -> CertifyResult:
    """Observed pessimistic/adversarial ratio of an edge subset against the
    applicable proven bound.  A zero adversarial cost makes the ratio
    vacuous; it is reported as 1 by convention."""
    edges = normalize_edges(edges)
    value = worst_case_cost(inst, edges, caps).value
    bound = applicable_bound(family_stats(edges), space_is_ptolemaic(inst))
    if value <= RATIO_TOL:
        observed = 1.0
    else:
        observed = pessimistic_cost(inst, edges) / value
    return CertifyResult(observed, bound, observed <= bound.value + RATIO_TOL)


def check_union_bounds(inst: LocUncInstance, parts, caps: EnumerationCaps = DEFAULT_CAPS) -> bool:
    """Numeric check of the union composition bounds.

    With per-part ratios r_t = pessimistic/adversarial, the union's
    pessimistic cost is at most (number of parts) * max r_t times its
    adversarial cost; when the parts are pairwise vertex-disjoint the
    factor drops to max r_t (the adversary then optimizes each part
    independently, so the parts' worst cases add up).
    """
    parts = [normalize_edges(p) for p in parts]
    if not parts:
        return True
    ratios = []
    for p in parts:
        val = worst_case_cost(inst, p, caps).value
        ratios.append(1.0 if val <= RATIO_TOL else pessimistic_cost(inst, p) / val)
    rho = max(ratios)
    union = normalize_edges([e for p in parts for e in p])
    union_value = worst_case_cost(inst, union, caps).value
    union_pess = pessimistic_cost(inst, union)
    if union_pess > len(parts) * rho * union_value + RATIO_TOL:
        return False
    vertex_sets = [{v for e in p for v in e} for p in parts]
    vertex_disjoint = all(
        not (vertex_sets[a] & vertex_sets[b])
        for a in range(len(parts))
        for b in range(a + 1, len(parts))
    )
    if vertex_disjoint and union_pess > rho * union_value + RATIO_TOL:
        return False
    return True


# ---------------------------------------------------------------------------
# Tightness constructions
# ---------------------------------------------------------------------------


def gen_tight_path(n: int):
    """Line instance on which a length-(n-1) path attains ratio exactly 2."""
    if n < 3:
        raise InvalidSize("tight path needs n >= 3")
    space = MetricSpace.from_points([[0.0], [1.0]])
    edges = [(i, i + 1) for i in range(n - 1)]
    usets = [(0,), (0, 1)] + [(1,)] * (n - 2)
    graph = Graph(n, edges)
    inst = LocUncInstance(graph, space, usets, ExplicitList([edges]))
    return inst, normalize_edges(edges)


def gen_tight_cycle(n: int):
    """Line instance on which an n-cycle attains pessimistic 4 vs true 2."""
    if n < 4:
        raise InvalidSize("tight cycle needs n >= 4")
    space = MetricSpace.from_points([[0.0], [1.0]])
    edges = [(i, (i + 1) % n) for i in range(n)]
    usets = [(0,), (0, 1), (1,), (0, 1)] + [(0,)] * (n - 4)
    graph = Graph(n, edges)
    inst = LocUncInstance(graph, space, usets, ExplicitList([edges]))
    return inst, normalize_edges(edges)


def gen_tight_clique(k: int):
    """Two-point instance on which the complete graph's ratio equals
    edge count over the maximum cut: 2k/(k+1) for odd k, 2(k-1)/k for
    even k."""
    if k < 2:
        raise InvalidSize("tight clique needs k >= 2")
    space = MetricSpace.from_points([[0.0], [1.0]])
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    usets = [(0, 1)] * k
    graph = Graph(k, edges)
    inst = LocUncInstance(graph, space, usets, ExplicitList([edges]))
    return inst, normalize_edges(edges)


def tight_clique_ratio(k: int) -> float:
    """Ratio attained by gen_tight_clique: edges / max cut."""
    cut = (k // 2) * ((k + 1) // 2)
    return comb(k, 2) / cut


def gen_tight_star(n: int):
    """Star on n vertices attaining ratio 3(n-1)/(n+1).

    The center has n-1 candidate locations; each leaf is fixed.  Distances:
    2/3 between any two center candidates and between any two leaf points,
    1 between candidate i and leaf i, 1/3 between candidate i and any other
    leaf.
    """
    if n < 3:
        raise InvalidSize("tight star needs n >= 3")
    leaves = n - 1
    size = 2 * leaves  # center candidates then leaf points
    mat = np.full((size, size), 2.0 / 3.0)
    np.fill_diagonal(mat, 0.0)
    for i in range(leaves):
        for j in range(leaves):
            mat[i, leaves + j] = mat[leaves + j, i] = 1.0 if i == j else 1.0 / 3.0
    space = MetricSpace.from_matrix(mat, validate=True)
    edges = [(0, i) for i in range(1, n)]
    usets = [tuple(range(leaves))] + [(leaves + i,) for i in range(leaves)]
    graph = Graph(n, edges)
    inst = LocUncInstance(graph, space, usets, ExplicitList([edges]))
    return inst, normalize_edges(edges)


def gen_center_trap(eps: float):
    """Three-vertex, pick-one-edge family on a line where the barycenter
    heuristic pays 1 while the optimum costs eps.

    The third vertex can sit at -1, 0 or 1; its barycenter is the middle
    point, which hides the spread from the barycenter pricing.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    space = MetricSpace.from_points([[-1.0], [0.0], [eps], [1.0]])
    edges = [(0, 1), (1, 2)]
    usets = [(2,), (1,), (0, 1, 3)]
    graph = Graph(3, edges)
    family = ExplicitList([[(0, 1)], [(1, 2)]])
    return LocUncInstance(graph, space, usets, family)
