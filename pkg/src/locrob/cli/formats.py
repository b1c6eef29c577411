"""Line-oriented text format for problem instances.

Sections appear in fixed order: GRAPH (vertex count and edge list), METRIC
(one of the three variants with its payload), USETS (one `uset` line per
vertex) and FAMILY (one descriptor line), closed by END.  `#` starts a
comment; blank lines are ignored.  Writing then parsing reproduces the
instance exactly (floats are emitted with `repr`, which round-trips).
"""

from __future__ import annotations

from typing import List, Tuple

import numpy as np

from ..errors import ParseError
from ..instance import (
    Assignment,
    ExplicitList,
    Graph,
    LocUncInstance,
    PMedian,
    STPath,
    SpanningTree,
    SteinerTree,
)
from ..metric import MetricSpace


def dumps_instance(inst: LocUncInstance) -> str:
    out: List[str] = []
    push = out.append
    push("GRAPH")
    push(f"nodes {inst.graph.n}")
    for i, j in inst.graph.edges:
        push(f"edge {i} {j}")

    push("METRIC")
    space = inst.space
    if space.kind == "euclidean":
        push("kind euclidean")
        push(f"dim {space.coords.shape[1]}")
        for row in space.coords:
            push("point " + " ".join(repr(float(c)) for c in row))
    elif space.kind == "graph":
        push("kind graph")
        push(f"nodes {len(space)}")
        for i, j, w in space.weighted_edges:
            push(f"wedge {i} {j} {w!r}")
    else:
        push("kind matrix")
        push(f"size {len(space)}")
        push(f"validated {1 if space.validated else 0}")
        for row in space.matrix:
            push("row " + " ".join(repr(float(v)) for v in row))

    push("USETS")
    for v, uset in enumerate(inst.usets):
        push(f"uset {v} " + " ".join(str(p) for p in uset))

    push("FAMILY")
    fam = inst.family
    if fam is None:
        push("none")
    elif isinstance(fam, STPath):
        push(f"stpath {fam.s} {fam.t}")
    elif isinstance(fam, SpanningTree):
        push("spanningtree")
    elif isinstance(fam, SteinerTree):
        push("steiner " + " ".join(map(str, fam.terminals)))
    elif isinstance(fam, PMedian):
        push(
            f"pmedian {fam.p} clients "
            + " ".join(map(str, fam.clients))
            + " sites "
            + " ".join(map(str, fam.sites))
        )
    elif isinstance(fam, Assignment):
        push(
            "assignment left "
            + " ".join(map(str, fam.left))
            + " right "
            + " ".join(map(str, fam.right))
        )
    elif isinstance(fam, ExplicitList):
        push(f"explicit {len(fam.subsets)}")
        for sub in fam.subsets:
            push("subset " + " ".join(f"{i} {j}" for i, j in sub))
    push("END")
    return "\n".join(out) + "\n"


def write_instance(inst: LocUncInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_instance(inst))


class _Lines:
    def __init__(self, text):
        self.rows = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.split("#", 1)[0].strip()
            if stripped:
                self.rows.append((lineno, stripped))
        self.pos = 0

    def peek(self):
        return self.rows[self.pos] if self.pos < len(self.rows) else (None, None)

    def next(self, expect=None):
        lineno, row = self.peek()
        if row is None:
            raise ParseError("unexpected end of file")
        self.pos += 1
        if expect is not None and row != expect:
            raise ParseError(f"expected '{expect}', got '{row}'", lineno)
        return lineno, row


def _ints(parts, lineno):
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"expected integers, got {parts!r}", lineno)


def _floats(parts, lineno):
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ParseError(f"expected numbers, got {parts!r}", lineno)


def parse_instance_text(text: str) -> LocUncInstance:
    lines = _Lines(text)
    lines.next("GRAPH")
    lineno, row = lines.next()
    if not row.startswith("nodes "):
        raise ParseError("expected 'nodes <n>'", lineno)
    n = _ints(row.split()[1:], lineno)[0]
    edges: List[Tuple[int, int]] = []
    while True:
        lineno, row = lines.peek()
        if row is None or not row.startswith("edge "):
            break
        lines.next()
        i, j = _ints(row.split()[1:], lineno)
        edges.append((i, j))

    lines.next("METRIC")
    lineno, row = lines.next()
    if not row.startswith("kind "):
        raise ParseError("expected 'kind <variant>'", lineno)
    kind = row.split()[1]
    if kind == "euclidean":
        lineno, row = lines.next()
        if not row.startswith("dim "):
            raise ParseError("expected 'dim <l>'", lineno)
        dim = _ints(row.split()[1:], lineno)[0]
        pts = []
        while True:
            lineno, row = lines.peek()
            if row is None or not row.startswith("point "):
                break
            lines.next()
            vals = _floats(row.split()[1:], lineno)
            if len(vals) != dim:
                raise ParseError(f"point needs {dim} coordinates", lineno)
            pts.append(vals)
        if not pts:
            raise ParseError("euclidean metric needs at least one point", lineno)
        space = MetricSpace.from_points(pts)
    elif kind == "graph":
        lineno, row = lines.next()
        if not row.startswith("nodes "):
            raise ParseError("expected 'nodes <n>'", lineno)
        gm = _ints(row.split()[1:], lineno)[0]
        wedges = []
        while True:
            lineno, row = lines.peek()
            if row is None or not row.startswith("wedge "):
                break
            lines.next()
            parts = row.split()[1:]
            if len(parts) != 3:
                raise ParseError("wedge needs two vertices and a weight", lineno)
            i, j = _ints(parts[:2], lineno)
            (w,) = _floats(parts[2:], lineno)
            wedges.append((i, j, w))
        space = MetricSpace.from_weighted_graph(gm, wedges)
    elif kind == "matrix":
        lineno, row = lines.next()
        if not row.startswith("size "):
            raise ParseError("expected 'size <k>'", lineno)
        size = _ints(row.split()[1:], lineno)[0]
        lineno, row = lines.next()
        if not row.startswith("validated "):
            raise ParseError("expected 'validated 0|1'", lineno)
        validated = bool(_ints(row.split()[1:], lineno)[0])
        rows = []
        for _ in range(size):
            lineno, row = lines.next()
            if not row.startswith("row "):
                raise ParseError("expected matrix 'row'", lineno)
            vals = _floats(row.split()[1:], lineno)
            if len(vals) != size:
                raise ParseError(f"row needs {size} entries", lineno)
            rows.append(vals)
        space = MetricSpace.from_matrix(np.array(rows), validate=validated)
    else:
        raise ParseError(f"unknown metric kind '{kind}'", lineno)

    lines.next("USETS")
    usets: List[Tuple[int, ...]] = [None] * n
    while True:
        lineno, row = lines.peek()
        if row is None or not row.startswith("uset "):
            break
        lines.next()
        vals = _ints(row.split()[1:], lineno)
        if len(vals) < 2:
            raise ParseError("uset line needs a vertex and at least one point", lineno)
        v, pts = vals[0], vals[1:]
        if not 0 <= v < n:
            raise ParseError(f"uset vertex {v} out of range", lineno)
        if usets[v] is not None:
            raise ParseError(f"duplicate uset line for vertex {v}", lineno)
        usets[v] = tuple(pts)
    missing = [v for v, u in enumerate(usets) if u is None]
    if missing:
        raise ParseError(f"missing uset lines for vertices {missing}")

    lines.next("FAMILY")
    lineno, row = lines.next()
    parts = row.split()
    tag = parts[0]
    if tag == "none":
        family = None
    elif tag == "stpath":
        s, t = _ints(parts[1:], lineno)
        family = STPath(s, t)
    elif tag == "spanningtree":
        family = SpanningTree()
    elif tag == "steiner":
        family = SteinerTree(_ints(parts[1:], lineno))
    elif tag == "pmedian":
        try:
            p = int(parts[1])
            ci = parts.index("clients")
            si = parts.index("sites")
        except (ValueError, IndexError):
            raise ParseError("malformed pmedian line", lineno)
        family = PMedian(_ints(parts[ci + 1 : si], lineno), _ints(parts[si + 1 :], lineno), p)
    elif tag == "assignment":
        try:
            li = parts.index("left")
            ri = parts.index("right")
        except ValueError:
            raise ParseError("malformed assignment line", lineno)
        family = Assignment(_ints(parts[li + 1 : ri], lineno), _ints(parts[ri + 1 :], lineno))
    elif tag == "explicit":
        count = _ints(parts[1:], lineno)[0]
        subsets = []
        for _ in range(count):
            lineno, row = lines.next()
            sp = row.split()
            if sp[0] != "subset":
                raise ParseError("expected 'subset' line", lineno)
            vals = _ints(sp[1:], lineno)
            if len(vals) % 2:
                raise ParseError("subset needs an even number of vertex ids", lineno)
            subsets.append(list(zip(vals[::2], vals[1::2])))
        family = ExplicitList(subsets)
    else:
        raise ParseError(f"unknown family '{tag}'", lineno)

    lines.next("END")
    try:
        return LocUncInstance(Graph(n, edges), space, usets, family)
    except ParseError:
        raise
    except Exception as exc:  # surface construction problems as parse errors
        raise ParseError(str(exc))


def parse_instance(path) -> LocUncInstance:
    with open(path) as fh:
        return parse_instance_text(fh.read())
