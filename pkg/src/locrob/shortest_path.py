"""Robust shortest path: exact profile dynamic program and an
epsilon-approximation scheme obtained by rounding the distance matrix.

A *profile* of a partial path from vertex i to the destination is the
vector of worst-case path costs conditioned on each candidate location of
i.  Layer k of the program holds, per vertex, all distinct profiles of
walks with at most k edges; extending a walk over an edge maxes over the
neighbour's locations.  The recursion can produce non-simple walks; hop
budgets are capped at n-1 and the selected representative has its cycles
excised afterwards, which can only shrink profile entries because all
costs are nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import Infeasible
from .instance import LocUncInstance, STPath, normalize_edges
from .approx import solve_with_worst_distances
from .families import DEFAULT_CAPS, EnumerationCaps

VALUE_TOL = 1e-9
KEY_DIGITS = 12  # float-noise guard when hashing profiles


@dataclass
class SPStats:
    """Size counters of one dynamic-programming run."""

    n_profiles: int = 0
    n_values: int = 0
    max_cell: int = 0
    hop_limit: int = 0
    prune_bound: Optional[float] = None
    extensions: int = 0
    table_bytes: int = 0

    CSV_HEADER = "n_profiles,n_values,max_cell,hop_limit,prune_bound,extensions,table_bytes"

    def as_row(self) -> str:
        pb = "" if self.prune_bound is None else repr(self.prune_bound)
        return (
            f"{self.n_profiles},{self.n_values},{self.max_cell},"
            f"{self.hop_limit},{pb},{self.extensions},{self.table_bytes}"
        )


@dataclass
class SPResult:
    path: Tuple[int, ...]     # vertex sequence from source to destination
    value: float
    stats: SPStats = field(default_factory=SPStats)

    @property
    def edges(self):
        return normalize_edges(zip(self.path, self.path[1:]))


def _require_st(inst: LocUncInstance) -> STPath:
    if not isinstance(inst.family, STPath):
        raise ValueError("instance family must be a source-destination path family")
    return inst.family


def path_profile(inst: LocUncInstance, vertices, dist) -> np.ndarray:
    """Exact profile of a simple path, computed backward from the end."""
    prof = np.zeros(len(inst.usets[vertices[-1]]))
    for k in range(len(vertices) - 2, -1, -1):
        i, j = vertices[k], vertices[k + 1]
        step = dist[np.ix_(inst.usets[i], inst.usets[j])]
        prof = (step + prof[None, :]).max(axis=1)
    return prof


def _excise_cycles(walk):
    walk = list(walk)
    while True:
        seen = {}
        cut = None
        for pos, v in enumerate(walk):
            if v in seen:
                cut = (seen[v], pos)
                break
            seen[v] = pos
        if cut is None:
            return tuple(walk)
        walk = walk[: cut[0]] + walk[cut[1]:]


def _profile_dp(inst, dist, prune_bound, stats: SPStats):
    """All profiles of source-to-destination walks within the hop budget.

    Returns the final cell at the source: an ordered dict mapping rounded
    profile keys to (profile, representative walk).
    """
    fam = _require_st(inst)
    n = inst.graph.n
    adj = inst.graph.adj
    usets = inst.usets
    hop_limit = n - 1
    stats.hop_limit = hop_limit

    zero = np.zeros(len(usets[fam.t]))
    cells: Dict[int, dict] = {v: {} for v in range(n)}
    cells[fam.t][tuple(zero.round(KEY_DIGITS))] = (zero, (fam.t,))

    for _ in range(hop_limit):
        prev = {v: dict(cell) for v, cell in cells.items()}
        for i in range(n):
            cell = cells[i]
            pts_i = usets[i]
            for j in adj[i]:
                if not prev[j]:
                    continue
                step = dist[np.ix_(pts_i, usets[j])]
                for prof_j, walk in prev[j].values():
                    prof = (step + prof_j[None, :]).max(axis=1)
                    stats.extensions += 1
                    if prune_bound is not None and prof.max() > prune_bound:
                        continue
                    key = tuple(prof.round(KEY_DIGITS))
                    if key not in cell:
                        cell[key] = (prof, (i,) + walk)

    all_keys = set()
    all_values = set()
    for v in range(n):
        stats.max_cell = max(stats.max_cell, len(cells[v]))
        for key, (_, walk) in cells[v].items():
            all_keys.add(key)
            all_values.update(key)
            stats.table_bytes += 8 * (len(key) + len(walk))
    stats.n_profiles = len(all_keys)
    stats.n_values = len(all_values)
    if not cells[fam.s]:
        raise Infeasible(f"no path from {fam.s} to {fam.t}")
    return cells[fam.s]


def _select_path(inst, source_cell, dist):
    """Pick the profile minimizing its worst component, excise cycles from
    its representative walk, and return the resulting simple path with its
    exact profile under `dist`."""
    best = None
    for prof, walk in source_cell.values():
        worst = float(prof.max())
        if best is None or worst < best[0] - VALUE_TOL:
            best = (worst, prof, walk)
    _, prof, walk = best
    path = _excise_cycles(walk)
    exact = path_profile(inst, path, dist)
    assert np.all(exact <= prof + VALUE_TOL), "cycle excision increased a profile entry"
    return path, float(exact.max()), best[0]


def robust_shortest_path(
    inst: LocUncInstance, dist=None, caps: EnumerationCaps = DEFAULT_CAPS
) -> SPResult:
    """Exact robust shortest path.

    `dist` may override the instance metric with any nonnegative symmetric
    matrix (it need not satisfy the triangle inequality).
    """
    dist = inst.space.matrix if dist is None else np.asarray(dist, dtype=float)
    stats = SPStats()
    cell = _profile_dp(inst, dist, None, stats)
    path, value, selected = _select_path(inst, cell, dist)
    assert abs(value - selected) <= VALUE_TOL * max(1.0, abs(value))
    return SPResult(path, value, stats)


def _edges_to_path(edges, s, t):
    adj = {}
    for i, j in edges:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    path = [s]
    prev = None
    while path[-1] != t:
        nxts = [w for w in adj[path[-1]] if w != prev]
        if len(nxts) != 1:
            raise ValueError("edge set is not a simple s-t path")
        prev = path[-1]
        path.append(nxts[0])
    return tuple(path)


def robust_shortest_path_fptas(
    inst: LocUncInstance, epsilon: float, caps: EnumerationCaps = DEFAULT_CAPS
) -> SPResult:
    """Path whose true worst-case cost is within (1 + epsilon) of optimal.

    Bootstraps an upper bound A from the worst-distance heuristic (a
    2-approximation for paths), rounds every distance up to a multiple of
    epsilon*A/(2n), prunes partial profiles whose worst entry already
    exceeds A(1 + n*eps'), and solves the rounded instance exactly.  The
    rounded program runs on integer multiples of the rounding unit, so the
    distinct-value counter is exact: at most n + 2 + ceil(2n/epsilon)
    values can appear.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    fam = _require_st(inst)
    n = inst.graph.n

    boot_edges = solve_with_worst_distances(inst, caps)
    boot_path = _edges_to_path(boot_edges, fam.s, fam.t)
    d = inst.space.matrix
    upper = float(path_profile(inst, boot_path, d).max())
    if upper <= VALUE_TOL:
        return SPResult(boot_path, 0.0, SPStats(hop_limit=n - 1))

    eps_prime = epsilon / (2 * n)
    unit = eps_prime * upper
    steps = np.ceil(d / unit - 1e-9)
    steps = np.where(steps * unit < d, steps + 1, steps)  # guard float ceil
    # profiles of surviving partial paths live on the integer grid 0..n+1/eps'
    prune_units = float(np.floor(n + 1.0 / eps_prime + 1e-9)) + 1e-6

    stats = SPStats(prune_bound=prune_units)
    cell = _profile_dp(inst, steps, prune_units, stats)
    path, _, _ = _select_path(inst, cell, steps)
    value = float(path_profile(inst, path, d).max())
    return SPResult(path, value, stats)
