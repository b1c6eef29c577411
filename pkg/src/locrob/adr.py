"""Conservative conic reformulation for Euclidean instances via affine
decision rules.

The model introduces, per directed edge, one second-order-cone row tying a
scalar to the norm of the two endpoint decision vectors, and per
(vertex, incident edge, candidate location) one cone row on the distance
between that location and the vertex's decision vector; big-M rows
linearize the products with the edge selectors.  Any feasible point
certifies an upper bound on the worst-case cost of the selected edge set,
so fixing the binaries and the decision vectors and tightening everything
else yields a valid bound without a conic solver.  Full optimization of
the model is delegated to external solvers through a documented text
serialization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import UnsupportedMetric
from .instance import LocUncInstance, max_pair_distance, normalize_edges


@dataclass(frozen=True)
class SOCRow:
    """t_var >= || const + sum(sign * vector_var) ||."""

    t_var: str
    const: Tuple[float, ...]
    plus: Tuple[str, ...]
    minus: Tuple[str, ...]


@dataclass(frozen=True)
class LinearRow:
    """sum(coef * var) >= const."""

    terms: Tuple[Tuple[str, float], ...]
    const: float
    label: str


@dataclass
class ConicModel:
    n: int
    m: int
    dim: int
    sigma: Tuple[int, ...]
    arcs: Tuple[Tuple[int, int], ...]   # edges directed low -> high
    big_m: Dict[Tuple[int, int], float]
    binaries: Tuple[str, ...]
    scalars: Tuple[str, ...]
    vectors: Tuple[str, ...]
    soc_rows: Tuple[SOCRow, ...]
    linear_rows: Tuple[LinearRow, ...]
    family_tag: str
    points: Dict[Tuple[int, int], Tuple[float, ...]] = field(default_factory=dict)

    def counts(self):
        return {
            "binaries": len(self.binaries),
            "scalars": len(self.scalars),
            "vectors": len(self.vectors),
            "soc": len(self.soc_rows),
            "linear": len(self.linear_rows),
        }


def _x(i, j):
    return f"x_{i}_{j}"


def _nu(i, j):
    return f"nu_{i}_{j}"


def _nupt(v, i, j, k):
    return f"nupt_{v}_{i}_{j}_{k}"


def _pi(v, i, j, k):
    return f"pi_{v}_{i}_{j}_{k}"


def _muv(v, i, j):
    return f"muv_{v}_{i}_{j}"


def family_tag(family) -> str:
    if family is None:
        return "none"
    return type(family).__name__.lower()


def build_conic_model(inst: LocUncInstance, family=None) -> ConicModel:
    """Construct the affine-rule model for a Euclidean instance.

    Every edge is directed from its lower endpoint; decision vectors exist
    only for endpoint/edge pairs (the others are fixed to zero without
    loss).  Variable and cone counts are deterministic functions of
    (n, m, per-vertex set sizes, dimension).
    """
    if inst.space.kind != "euclidean":
        raise UnsupportedMetric("affine-rule model requires Euclidean coordinates")
    coords = inst.space.coords
    graph = inst.graph
    dim = coords.shape[1]
    arcs = graph.edges  # (low, high): low is the tail

    binaries = [_x(*a) for a in arcs]
    scalars = ["omega"] + [f"mu0_{i}" for i in range(graph.n)]
    vectors: List[str] = []
    soc_rows: List[SOCRow] = []
    linear_rows: List[LinearRow] = []
    big_m = {a: max_pair_distance(inst, *a) for a in arcs}
    points: Dict[Tuple[int, int], Tuple[float, ...]] = {}

    for i in range(graph.n):
        for k, p in enumerate(inst.usets[i]):
            points[(i, k)] = tuple(float(c) for c in coords[p])

    for a in arcs:
        i, j = a
        vectors.append(_muv(i, i, j))
        vectors.append(_muv(j, i, j))
        scalars.append(_nu(i, j))
        soc_rows.append(
            SOCRow(_nu(i, j), tuple([0.0] * dim), (_muv(i, i, j), _muv(j, i, j)), ())
        )
    for a in arcs:
        i, j = a
        # tail sees "u - mu", head sees "u + mu"
        for k in range(len(inst.usets[i])):
            scalars.append(_nupt(i, i, j, k))
            scalars.append(_pi(i, i, j, k))
            soc_rows.append(SOCRow(_nupt(i, i, j, k), points[(i, k)], (), (_muv(i, i, j),)))
        for k in range(len(inst.usets[j])):
            scalars.append(_nupt(j, i, j, k))
            scalars.append(_pi(j, i, j, k))
            soc_rows.append(SOCRow(_nupt(j, i, j, k), points[(j, k)], (_muv(j, i, j),), ()))

    omega_terms = [("omega", 1.0)]
    omega_terms += [(f"mu0_{i}", -1.0) for i in range(graph.n)]
    omega_terms += [(_nu(*a), -1.0) for a in arcs]
    linear_rows.append(LinearRow(tuple(omega_terms), 0.0, "omega"))

    for i in range(graph.n):
        incident = [a for a in arcs if i in a]
        for k in range(len(inst.usets[i])):
            terms = [(f"mu0_{i}", 1.0)] + [(_pi(i, *a, k), -1.0) for a in incident]
            linear_rows.append(LinearRow(tuple(terms), 0.0, f"mu0_{i}_{k}"))

    for a in arcs:
        i, j = a
        for v in (i, j):
            for k in range(len(inst.usets[v])):
                linear_rows.append(
                    LinearRow(
                        (
                            (_pi(v, i, j, k), 1.0),
                            (_nupt(v, i, j, k), -1.0),
                            (_x(i, j), -big_m[a]),
                        ),
                        -big_m[a],
                        f"bigM_{v}_{i}_{j}_{k}",
                    )
                )
                linear_rows.append(
                    LinearRow(((_pi(v, i, j, k), 1.0),), 0.0, f"nonneg_{v}_{i}_{j}_{k}")
                )

    sigma = tuple(len(u) for u in inst.usets)
    fam = family if family is not None else inst.family
    return ConicModel(
        n=graph.n,
        m=graph.m,
        dim=dim,
        sigma=sigma,
        arcs=arcs,
        big_m=big_m,
        binaries=tuple(binaries),
        scalars=tuple(scalars),
        vectors=tuple(vectors),
        soc_rows=tuple(soc_rows),
        linear_rows=tuple(linear_rows),
        family_tag=family_tag(fam),
        points=points,
    )


def default_vectors(model: ConicModel, inst: LocUncInstance, support) -> Dict[str, np.ndarray]:
    """Centroid rule for the decision vectors.

    Tails take their location centroid, heads its negation; on unselected
    edges the head mirrors the tail's centroid so the edge cone contributes
    nothing and the big-M rows stay slack.
    """
    support = set(normalize_edges(support))
    coords = inst.space.coords
    centroid = [coords[list(inst.usets[i])].mean(axis=0) for i in range(inst.graph.n)]
    out = {}
    for i, j in model.arcs:
        if (i, j) in support:
            out[_muv(i, i, j)] = centroid[i]
            out[_muv(j, i, j)] = -centroid[j]
        else:
            out[_muv(i, i, j)] = centroid[i]
            out[_muv(j, i, j)] = -centroid[i]
    return out


def evaluate_bound(model: ConicModel, support, mu: Optional[Dict[str, np.ndarray]] = None,
                   inst: Optional[LocUncInstance] = None) -> float:
    """Smallest objective consistent with the model at fixed binaries and
    decision vectors.

    `support` is the selected edge set; `mu` defaults to the centroid rule
    (requires `inst`).  The result is always a valid upper bound on the
    worst-case cost of the support.
    """
    support = set(normalize_edges(support))
    if mu is None:
        if inst is None:
            raise ValueError("centroid default needs the instance")
        mu = default_vectors(model, inst, support)
    x = {a: (1.0 if a in support else 0.0) for a in model.arcs}

    t_vals: Dict[str, float] = {}
    for row in model.soc_rows:
        vec = np.array(row.const, dtype=float)
        for name in row.plus:
            vec = vec + np.asarray(mu[name], dtype=float)
        for name in row.minus:
            vec = vec - np.asarray(mu[name], dtype=float)
        t_vals[row.t_var] = float(np.linalg.norm(vec))

    pi_vals: Dict[str, float] = {}
    for a in model.arcs:
        i, j = a
        for v in (i, j):
            for k in range(model.sigma[v]):
                slack = model.big_m[a] * (1.0 - x[a])
                pi_vals[_pi(v, i, j, k)] = max(0.0, t_vals[_nupt(v, i, j, k)] - slack)

    omega = 0.0
    for i in range(model.n):
        incident = [a for a in model.arcs if i in a]
        best = 0.0
        for k in range(model.sigma[i]):
            best = max(best, sum(pi_vals[_pi(i, *a, k)] for a in incident))
        omega += best
    omega += sum(t_vals[_nu(*a)] for a in model.arcs)
    return omega


def dumps_model(model: ConicModel) -> str:
    """Deterministic plain-text rendering of the model (see README for the
    row grammar)."""
    out = []
    push = out.append
    push("LOCROB-CONIC 1")
    push(f"NVERT {model.n}")
    push(f"NEDGE {model.m}")
    push(f"DIM {model.dim}")
    push("SIGMA " + " ".join(map(str, model.sigma)))
    push(f"FAMILY {model.family_tag}")
    push(f"BIGM {model.m}")
    for a in model.arcs:
        push(f"bigm {a[0]} {a[1]} {model.big_m[a]!r}")
    push(f"BINARIES {len(model.binaries)}")
    for name in model.binaries:
        push(name)
    push(f"SCALARS {len(model.scalars)}")
    for name in model.scalars:
        push(name)
    push(f"VECTORS {len(model.vectors)}")
    for name in model.vectors:
        push(name)
    push(f"LINEAR {len(model.linear_rows)}")
    for row in model.linear_rows:
        terms = " ".join(f"{name} {coef!r}" for name, coef in row.terms)
        push(f"lin {row.label} : {terms} >= {row.const!r}")
    push(f"SOC {len(model.soc_rows)}")
    for row in model.soc_rows:
        const = " ".join(repr(c) for c in row.const)
        parts = [f"+{v}" for v in row.plus] + [f"-{v}" for v in row.minus]
        push(f"soc {row.t_var} : {const} : {' '.join(parts)}")
    push("OBJECTIVE omega")
    return "\n".join(out) + "\n"


def serialize_model(model: ConicModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_model(model))
