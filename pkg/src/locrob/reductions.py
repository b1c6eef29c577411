"""Instance generators built from hardness-proof constructions.

The two number-partitioning reductions build robust path and spanning-tree
instances whose optimal value hits a closed-form bound exactly when a
perfect partition exists, making them crisp integer-exact test oracles.
The max-cut and list-coloring constructions turn classic combinatorial
problems into adversarial-evaluation instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .errors import InvalidScale
from .instance import (
    ExplicitList,
    Graph,
    LocUncInstance,
    STPath,
    SpanningTree,
)
from .metric import MetricSpace, all_pairs_shortest_paths


@dataclass(frozen=True)
class PartitionInput:
    """Positive integers to split into two halves of equal sum, plus the
    large scale constant that dominates them in the constructions."""

    values: Tuple[int, ...]
    scale: int

    def __init__(self, values, scale):
        values = tuple(int(a) for a in values)
        if not values or any(a < 1 for a in values):
            raise ValueError("values must be positive integers")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "scale", int(scale))

    @property
    def total(self):
        return sum(self.values)


def best_split(values) -> Tuple[int, bool]:
    """Minimum over subsets S of max(sum(S), sum(rest)), and whether a
    perfect half-half split exists.  Exact integers throughout."""
    values = tuple(values)
    total = sum(values)
    best = total
    for mask in range(1 << len(values)):
        s = sum(a for k, a in enumerate(values) if mask >> k & 1)
        best = min(best, max(s, total - s))
    return best, (total % 2 == 0 and best == total // 2)


def sp_scale_threshold(pin: PartitionInput) -> int:
    return 2 * len(pin.values) * pin.total


def mst_scale_threshold(pin: PartitionInput) -> int:
    return (4 * len(pin.values) - 1) * pin.total


def gen_partition_sp(pin: PartitionInput) -> LocUncInstance:
    """Robust path instance encoding the partition problem on a line.

    Layout: source and destination pinned at 0; between them n stages,
    each offering two vertices whose two candidate coordinates straddle 0
    at magnitudes K or K + a_i (interval endpoints suffice: the worst case
    of |.| over an interval is at an endpoint).  Choosing the lower vertex
    of stage i corresponds to putting i into the subset.  The robust
    optimum is 2nK + 2*max(sum(S), sum(rest)), minimized over subsets.
    """
    n = len(pin.values)
    K = pin.scale
    if K <= sp_scale_threshold(pin):
        raise InvalidScale(f"scale must exceed {sp_scale_threshold(pin)}")

    coords: Dict[float, int] = {}

    def pid(x):
        x = float(x)
        if x not in coords:
            coords[x] = len(coords)
        return coords[x]

    s, t = 0, 2 * n + 1
    v = {i: 2 * i - 1 for i in range(1, n + 1)}
    w = {i: 2 * i for i in range(1, n + 1)}
    usets: List[Tuple[int, ...]] = [()] * (2 * n + 2)
    usets[s] = usets[t] = (pid(0.0),)
    for i, a in enumerate(pin.values, start=1):
        if i % 2 == 1:
            usets[v[i]] = (pid(K + a), pid(-K))
            usets[w[i]] = (pid(K), pid(-(K + a)))
        else:
            usets[v[i]] = (pid(K), pid(-(K + a)))
            usets[w[i]] = (pid(K + a), pid(-K))

    edges = [(s, v[1]), (s, w[1]), (v[n], t), (w[n], t)]
    for i in range(1, n):
        for x in (v[i], w[i]):
            for y in (v[i + 1], w[i + 1]):
                edges.append((x, y))

    points = [[x] for x, _ in sorted(coords.items(), key=lambda kv: kv[1])]
    space = MetricSpace.from_points(points)
    graph = Graph(2 * n + 2, edges)
    return LocUncInstance(graph, space, usets, STPath(s, t))


def expected_sp_optimum(pin: PartitionInput) -> int:
    split, _ = best_split(pin.values)
    return 2 * len(pin.values) * pin.scale + 2 * split


def gen_partition_mst(pin: PartitionInput) -> LocUncInstance:
    """Robust spanning-tree instance encoding the partition problem.

    The problem graph is a ladder: rungs plus two rails whose stage-i
    segments cost 3K + a_i in one layer of the location graph and 3K in the
    other (reversed between the rails).  Rungs cost K when both endpoints
    sit in the same layer but only K - total when they straddle layers:
    without that discount the adversary could split the two vertex classes
    across layers and collect both rails' surpluses at once, killing the
    partition signal.  Every optimal tree takes all n+1 rungs and one rail
    segment per stage, so its worst case is
    (4n+1)K + max(sum(S), sum(rest)) for the chosen stages S.
    """
    n = len(pin.values)
    K = pin.scale
    if K <= mst_scale_threshold(pin):
        raise InvalidScale(f"scale must exceed {mst_scale_threshold(pin)}")

    cols = n + 1
    v1 = lambda i: i
    w1 = lambda i: cols + i
    v2 = lambda i: 2 * cols + i
    w2 = lambda i: 3 * cols + i

    cross = K - pin.total
    wedges = []
    for i in range(cols):
        wedges.append((v1(i), w1(i), K))
        wedges.append((v2(i), w2(i), K))
        wedges.append((w1(i), v2(i), cross))
        wedges.append((v1(i), w2(i), cross))
    for i in range(1, cols):
        for a, b in (
            (v1(i - 1), v2(i)),
            (v2(i - 1), v1(i)),
            (w1(i - 1), w2(i)),
            (w2(i - 1), w1(i)),
        ):
            wedges.append((a, b, 2 * K))
        a_i = pin.values[i - 1]
        wedges.append((v1(i - 1), v1(i), 3 * K + a_i))
        wedges.append((v2(i - 1), v2(i), 3 * K))
        wedges.append((w1(i - 1), w1(i), 3 * K))
        wedges.append((w2(i - 1), w2(i), 3 * K + a_i))

    matrix = all_pairs_shortest_paths(4 * cols, wedges)
    space = MetricSpace.from_matrix(matrix, validate=True)

    edges = [(i, cols + i) for i in range(cols)]  # rungs
    for i in range(1, cols):
        edges.append((i - 1, i))                  # lower rail
        edges.append((cols + i - 1, cols + i))    # upper rail
    graph = Graph(2 * cols, edges)
    usets = [(v1(i), v2(i)) for i in range(cols)] + [(w1(i), w2(i)) for i in range(cols)]
    return LocUncInstance(graph, space, usets, SpanningTree())


def expected_mst_optimum(pin: PartitionInput) -> int:
    split, _ = best_split(pin.values)
    n = len(pin.values)
    return (4 * n + 1) * pin.scale + split


def gen_maxcut_evalc(graph: Graph) -> LocUncInstance:
    """Two-point instance whose adversarial value over all edges equals the
    maximum cut of the graph."""
    space = MetricSpace.from_points([[0.0], [1.0]])
    usets = [(0, 1)] * graph.n
    return LocUncInstance(graph, space, usets, ExplicitList([graph.edges]))


def gen_listcol_evalc(graph: Graph, color_lists) -> LocUncInstance:
    """Discrete-metric instance whose adversarial value over all edges
    equals the edge count exactly when a proper list coloring exists."""
    color_lists = [tuple(c) for c in color_lists]
    if len(color_lists) != graph.n:
        raise ValueError("need one color list per vertex")
    colors = sorted({c for lst in color_lists for c in lst})
    index = {c: k for k, c in enumerate(colors)}
    mat = 1.0 - np.eye(len(colors))
    space = MetricSpace.from_matrix(mat, validate=True)
    usets = [tuple(index[c] for c in lst) for lst in color_lists]
    return LocUncInstance(graph, space, usets, ExplicitList([graph.edges]))
