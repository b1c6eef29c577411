"""Adversarial cost evaluation: given an edge subset F, find the joint
vertex placement maximizing the total length of F.

Three routes compute the exact value: a vectorized brute-force scan over
all placements of the touched vertices, a rooted-tree recursion when F is
a forest, and a dynamic program over a nice tree decomposition of the
subgraph induced by F.  `worst_case_cost` dispatches between them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import CapExceeded, InvalidDecomposition, NotATree
from .families import DEFAULT_CAPS, EnumerationCaps
from .instance import Graph, LocUncInstance, normalize_edges, scenario_cost

VALUE_TOL = 1e-9


@dataclass
class EvalResult:
    """Exact worst-case value together with a scenario attaining it."""

    value: float
    witness: Tuple[int, ...]
    stats: dict = field(default_factory=dict)


def _touched_vertices(edges):
    return sorted({v for e in edges for v in e})


def worst_case_cost_bruteforce(
    inst: LocUncInstance, edges, caps: EnumerationCaps = DEFAULT_CAPS
) -> EvalResult:
    """Scan every placement of the vertices touched by the edge set.

    The witness is the lexicographically smallest maximizer (untouched
    vertices pinned to their first location).
    """
    edges = normalize_edges(edges)
    if not edges:
        return EvalResult(0.0, tuple([0] * inst.graph.n))
    touched = _touched_vertices(edges)
    sizes = [len(inst.usets[v]) for v in touched]
    count = 1
    for s in sizes:
        count *= s
        if count > caps.bruteforce_max_scenarios:
            raise CapExceeded("scenario space too large for brute force")
    # index grid in row-major order = lexicographic over touched vertices
    grids = np.indices(sizes).reshape(len(sizes), -1)
    pos = {v: k for k, v in enumerate(touched)}
    d = inst.space.matrix
    total = np.zeros(grids.shape[1])
    for i, j in edges:
        pts_i = np.asarray(inst.usets[i])[grids[pos[i]]]
        pts_j = np.asarray(inst.usets[j])[grids[pos[j]]]
        total += d[pts_i, pts_j]
    best = int(np.argmax(total))  # first occurrence = lex-smallest
    witness = [0] * inst.graph.n
    for k, v in enumerate(touched):
        witness[v] = int(grids[k, best])
    return EvalResult(float(total[best]), tuple(witness))


# ---------------------------------------------------------------------------
# Rooted-tree recursion
# ---------------------------------------------------------------------------


def worst_case_cost_tree(inst: LocUncInstance, edges, root: Optional[int] = None) -> EvalResult:
    """Exact evaluation when the edge set is a forest.

    Each component is rooted (at `root` where applicable, else at its
    smallest vertex) and solved bottom-up: the table value for (vertex,
    location) is the worst suffix cost of the subtree hanging below it.
    """
    edges = normalize_edges(edges)
    witness = [0] * inst.graph.n
    if not edges:
        return EvalResult(0.0, tuple(witness))
    adj: Dict[int, List[int]] = {}
    for i, j in edges:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    if len(edges) != sum(1 for _ in adj) - _component_count(adj):
        raise NotATree("edge set contains a cycle")

    d = inst.space.matrix
    remaining = set(adj)
    total = 0.0
    while remaining:
        r = root if root in remaining else min(remaining)
        order, parent = _tree_order(adj, r)
        remaining -= set(order)
        # opt[v][k]: worst suffix cost below v when v sits at its k-th location
        opt = {}
        arg = {}
        for v in reversed(order):
            pts_v = inst.usets[v]
            vals = np.zeros(len(pts_v))
            for w in adj[v]:
                if parent.get(w) != v:
                    continue
                pts_w = np.asarray(inst.usets[w])
                # worst child location per own location, child table included
                table = d[np.ix_(pts_v, pts_w)] + opt[w][None, :]
                vals += table.max(axis=1)
                arg[(v, w)] = table.argmax(axis=1)
            opt[v] = vals
        k_root = int(np.argmax(opt[r]))
        total += float(opt[r][k_root])
        witness[r] = k_root
        stack = [(r, k_root)]
        while stack:
            v, k = stack.pop()
            for w in adj[v]:
                if parent.get(w) == v:
                    kw = int(arg[(v, w)][k])
                    witness[w] = kw
                    stack.append((w, kw))
    return EvalResult(total, tuple(witness))


def _component_count(adj):
    seen = set()
    comps = 0
    for start in adj:
        if start in seen:
            continue
        comps += 1
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def _tree_order(adj, root):
    order = [root]
    parent = {root: None}
    k = 0
    while k < len(order):
        v = order[k]
        k += 1
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
    return order, parent


# ---------------------------------------------------------------------------
# Nice tree decompositions
# ---------------------------------------------------------------------------

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass
class DecompositionNode:
    kind: str
    bag: frozenset
    children: Tuple[int, ...]
    vertex: Optional[int] = None  # introduced / forgotten vertex


@dataclass
class TreeDecomposition:
    """Rooted nice tree decomposition: every node is a leaf (empty bag),
    introduce, forget or join node, and the root bag is empty."""

    nodes: List[DecompositionNode]
    root: int

    @property
    def width(self):
        return max(len(n.bag) for n in self.nodes) - 1


def build_nice_decomposition(graph: Graph) -> TreeDecomposition:
    return decomposition_for(range(graph.n), graph.edges)


def decomposition_for(vertices, edges) -> TreeDecomposition:
    """Nice tree decomposition of the subgraph (vertices, edges).

    Bags come from a min-degree elimination ordering, so the width is at
    most that ordering's fill-in width.  Disconnected inputs are handled by
    chaining component roots together (bag-subtree connectivity is kept
    because the chained bags never share vertices across components).
    """
    vertices = sorted(set(vertices))
    edges = normalize_edges(edges)
    if not vertices:
        return TreeDecomposition([DecompositionNode(LEAF, frozenset(), ())], 0)

    work = {v: set() for v in vertices}
    for i, j in edges:
        work[i].add(j)
        work[j].add(i)
    order = []
    elim_bags = []
    live = dict(work)
    while live:
        v = min(live, key=lambda u: (len(live[u]), u))
        neigh = sorted(live[v])
        order.append(v)
        elim_bags.append(frozenset([v] + neigh))
        for a in neigh:
            live[a].discard(v)
        for a in neigh:  # fill-in
            for b in neigh:
                if a < b:
                    live[a].add(b)
                    live[b].add(a)
        del live[v]

    rank = {v: k for k, v in enumerate(order)}
    parent_of = {}
    for k, v in enumerate(order):
        later = [w for w in elim_bags[k] if w != v]
        if later:
            parent_of[k] = rank[min(later, key=lambda w: rank[w])]
        elif k + 1 < len(order):
            parent_of[k] = k + 1
    children_of = {k: [] for k in range(len(order))}
    for k, p in parent_of.items():
        children_of[p].append(k)
    root_bag = len(order) - 1

    nodes: List[DecompositionNode] = []

    def add(kind, bag, children, vertex=None):
        nodes.append(DecompositionNode(kind, frozenset(bag), tuple(children), vertex))
        return len(nodes) - 1

    def build(k):
        """Return node id whose bag equals elim_bags[k], covering its subtree."""
        bag = elim_bags[k]
        kids = [build(c) for c in sorted(children_of[k])]
        lifted = []
        for c_id in kids:
            lifted.append(_chain(c_id, nodes[c_id].bag, bag, add))
        if not lifted:
            base = add(LEAF, frozenset(), ())
            return _chain(base, frozenset(), bag, add)
        cur = lifted[0]
        for other in lifted[1:]:
            cur = add(JOIN, bag, (cur, other))
        return cur

    top = build(root_bag)
    root = _chain(top, nodes[top].bag, frozenset(), add)
    return TreeDecomposition(nodes, root)


def _chain(node_id, from_bag, to_bag, add):
    """Connect two bags by forgetting from_bag-only vertices then
    introducing to_bag-only vertices, one at a time."""
    cur, bag = node_id, set(from_bag)
    for v in sorted(from_bag - to_bag):
        bag.discard(v)
        cur = add(FORGET, bag, (cur,), v)
    for v in sorted(to_bag - from_bag):
        bag.add(v)
        cur = add(INTRODUCE, bag, (cur,), v)
    return cur


def validate_decomposition(dec: TreeDecomposition, vertices, edges) -> None:
    """Raise InvalidDecomposition unless all structural conditions hold."""
    vertices = set(vertices)
    edges = normalize_edges(edges)
    nodes = dec.nodes
    seen_children = set()
    for n in nodes:
        for c in n.children:
            if c in seen_children:
                raise InvalidDecomposition("node has two parents")
            seen_children.add(c)
    if dec.root in seen_children:
        raise InvalidDecomposition("root has a parent")

    covered = set()
    for n in nodes:
        covered |= n.bag
    if not vertices <= covered:
        raise InvalidDecomposition("vertex not covered by any bag")
    for e in edges:
        if not any(set(e) <= n.bag for n in nodes):
            raise InvalidDecomposition(f"edge {e} not inside any bag")

    # bag-subtree connectivity per vertex
    parent = {}
    for k, n in enumerate(nodes):
        for c in n.children:
            parent[c] = k
    for v in covered:
        holders = [k for k, n in enumerate(nodes) if v in n.bag]
        tops = [k for k in holders if parent.get(k) is None or v not in nodes[parent[k]].bag]
        if len(tops) != 1:
            raise InvalidDecomposition(f"bags containing {v} are not connected")

    if nodes[dec.root].bag:
        raise InvalidDecomposition("root bag not empty")
    for n in nodes:
        if n.kind == LEAF:
            if n.bag or n.children:
                raise InvalidDecomposition("leaf must have empty bag, no children")
        elif n.kind == INTRODUCE:
            (c,) = n.children
            if n.bag != nodes[c].bag | {n.vertex} or n.vertex in nodes[c].bag:
                raise InvalidDecomposition("bad introduce node")
        elif n.kind == FORGET:
            (c,) = n.children
            if n.bag != nodes[c].bag - {n.vertex} or n.vertex not in nodes[c].bag:
                raise InvalidDecomposition("bad forget node")
        elif n.kind == JOIN:
            if len(n.children) != 2:
                raise InvalidDecomposition("join needs two children")
            for c in n.children:
                if nodes[c].bag != n.bag:
                    raise InvalidDecomposition("join children bags differ")
        else:
            raise InvalidDecomposition(f"unknown node kind {n.kind}")


# ---------------------------------------------------------------------------
# Treewidth dynamic program
# ---------------------------------------------------------------------------


def worst_case_cost_treewidth(
    inst: LocUncInstance, edges, dec: TreeDecomposition
) -> EvalResult:
    """Exact evaluation by dynamic programming over a nice decomposition of
    the subgraph induced by the edge set.

    Table keys are location-index tuples over the sorted bag, enumerated in
    mixed-radix order.  Join nodes subtract the doubly counted edges inside
    the shared bag; forget nodes take the worst location of the dropped
    vertex and remember the argmax for witness reconstruction.
    """
    edges = normalize_edges(edges)
    touched = set(_touched_vertices(edges))
    validate_decomposition(dec, touched, edges)
    d = inst.space.matrix
    usets = inst.usets
    edge_set = set(edges)

    tables: Dict[int, np.ndarray] = {}
    forget_arg: Dict[int, np.ndarray] = {}
    bag_orders: Dict[int, Tuple[int, ...]] = {}

    def assignments(bag_order):
        sizes = [len(usets[v]) for v in bag_order]
        if not sizes:
            return np.zeros((1, 0), dtype=int)
        return np.indices(sizes).reshape(len(sizes), -1).T

    order = _postorder(dec)
    for nid in order:
        node = dec.nodes[nid]
        bag_order = tuple(sorted(node.bag))
        bag_orders[nid] = bag_order
        assigns = assignments(bag_order)
        if node.kind == LEAF:
            tables[nid] = np.zeros(1)
        elif node.kind == INTRODUCE:
            (c,) = node.children
            child_order = bag_orders[c]
            v = node.vertex
            vi = bag_order.index(v)
            child_pos = [bag_order.index(w) for w in child_order]
            vals = np.empty(len(assigns))
            inc = [w for w in bag_order if w != v and (min(v, w), max(v, w)) in edge_set]
            for r, a in enumerate(assigns):
                child_key = tuple(a[p] for p in child_pos)
                base = tables[c][_mixed_radix(child_key, child_order, usets)]
                pv = usets[v][a[vi]]
                extra = sum(d[pv, usets[w][a[bag_order.index(w)]]] for w in inc)
                vals[r] = base + extra
            tables[nid] = vals
        elif node.kind == FORGET:
            (c,) = node.children
            child_order = bag_orders[c]
            v = node.vertex
            nv = len(usets[v])
            vals = np.empty(len(assigns))
            args = np.empty(len(assigns), dtype=int)
            for r, a in enumerate(assigns):
                best, arg = -np.inf, 0
                for k in range(nv):
                    full = {w: a[bag_order.index(w)] for w in bag_order}
                    full[v] = k
                    key = tuple(full[w] for w in child_order)
                    val = tables[c][_mixed_radix(key, child_order, usets)]
                    if val > best + VALUE_TOL:
                        best, arg = val, k
                vals[r] = best
                args[r] = arg
            tables[nid] = vals
            forget_arg[nid] = args
        elif node.kind == JOIN:
            cl, cr = node.children
            corr = np.zeros(len(assigns))
            bag_edges = [
                (i, j)
                for i, j in edge_set
                if i in node.bag and j in node.bag
            ]
            for r, a in enumerate(assigns):
                pts = {w: usets[w][a[bag_order.index(w)]] for w in bag_order}
                corr[r] = sum(d[pts[i], pts[j]] for i, j in bag_edges)
            tables[nid] = tables[cl] + tables[cr] - corr

    value = float(tables[dec.root][0])

    # top-down witness reconstruction; every touched vertex is forgotten once
    witness = [0] * inst.graph.n
    stack = [(dec.root, ())]
    while stack:
        nid, key = stack.pop()
        node = dec.nodes[nid]
        bag_order = bag_orders[nid]
        if node.kind == LEAF:
            continue
        if node.kind == JOIN:
            stack.append((node.children[0], key))
            stack.append((node.children[1], key))
        elif node.kind == INTRODUCE:
            (c,) = node.children
            child_order = bag_orders[c]
            full = dict(zip(bag_order, key))
            stack.append((c, tuple(full[w] for w in child_order)))
        elif node.kind == FORGET:
            (c,) = node.children
            child_order = bag_orders[c]
            row = _mixed_radix(key, bag_order, usets)
            kv = int(forget_arg[nid][row])
            witness[node.vertex] = kv
            full = dict(zip(bag_order, key))
            full[node.vertex] = kv
            stack.append((c, tuple(full[w] for w in child_order)))

    table_entries = sum(t.size for t in tables.values())
    return EvalResult(value, tuple(witness), stats={"table_entries": table_entries})


def _mixed_radix(key, bag_order, usets):
    idx = 0
    for v, k in zip(bag_order, key):
        idx = idx * len(usets[v]) + k
    return idx


def _postorder(dec: TreeDecomposition):
    out, stack = [], [(dec.root, False)]
    while stack:
        nid, expanded = stack.pop()
        if expanded:
            out.append(nid)
        else:
            stack.append((nid, True))
            for c in dec.nodes[nid].children:
                stack.append((c, False))
    return out


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

TREEWIDTH_DISPATCH_LIMIT = 6


def is_forest(edges) -> bool:
    edges = normalize_edges(edges)
    parent = {}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in edges:
        parent.setdefault(i, i)
        parent.setdefault(j, j)
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def worst_case_cost(
    inst: LocUncInstance, edges, caps: EnumerationCaps = DEFAULT_CAPS
) -> EvalResult:
    """Exact adversarial value of an edge subset.

    Forests go to the tree recursion; otherwise a decomposition of the
    induced subgraph is built and used when its width is small, falling
    back to (cap-guarded) brute force.
    """
    edges = normalize_edges(edges)
    if not edges:
        return EvalResult(0.0, tuple([0] * inst.graph.n))
    if is_forest(edges):
        return worst_case_cost_tree(inst, edges)
    touched = _touched_vertices(edges)
    dec = decomposition_for(touched, edges)
    if dec.width <= TREEWIDTH_DISPATCH_LIMIT:
        return worst_case_cost_treewidth(inst, edges, dec)
    return worst_case_cost_bruteforce(inst, edges, caps)
