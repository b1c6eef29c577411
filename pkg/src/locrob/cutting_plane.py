"""Exact min-max solver by scenario generation.

The master problem keeps a small scenario set and picks the feasible edge
subset minimizing its worst cost over that set; the separation step
evaluates the true adversarial cost of the incumbent and, when it exceeds
the master value, adds the maximizing scenario and repeats.  The master is
solved by enumerating the family once and updating per-subset scenario
maxima incrementally (one new cost column per added scenario).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import Infeasible
from .families import DEFAULT_CAPS, EnumerationCaps, enumerate_family
from .instance import LocUncInstance, barycenter_scenario, scenario_cost
from .worst_case import worst_case_cost

CONVERGENCE_TOL = 1e-9


@dataclass
class IterationRow:
    iteration: int
    omega: float
    incumbent_value: float
    scenario_added: Optional[Tuple[int, ...]]
    wall_time: float


@dataclass
class CutState:
    """Scenario set, incumbent and per-iteration log of one solve."""

    scenarios: List[Tuple[int, ...]] = field(default_factory=list)
    incumbent: Optional[Tuple] = None
    omega: float = float("nan")
    log: List[IterationRow] = field(default_factory=list)

    def log_csv(self, include_times: bool = False) -> str:
        lines = ["iteration,omega,incumbent_value,scenario_added,wall_time"]
        for row in self.log:
            scen = "" if row.scenario_added is None else "+".join(map(str, row.scenario_added))
            t = repr(row.wall_time) if include_times else "0.0"
            lines.append(
                f"{row.iteration},{row.omega!r},{row.incumbent_value!r},{scen},{t}"
            )
        return "\n".join(lines) + "\n"


class _Master:
    """Enumerated family with incrementally maintained scenario maxima."""

    def __init__(self, inst: LocUncInstance, caps: EnumerationCaps):
        self.inst = inst
        self.members = list(enumerate_family(inst.family, inst.graph, caps))
        if not self.members:
            raise Infeasible("feasible family is empty")
        m = inst.graph.m
        inc = np.zeros((len(self.members), m))
        for r, edges in enumerate(self.members):
            for e in edges:
                inc[r, inst.graph.edge_index[e]] = 1.0
        self.incidence = inc
        self.max_cost = np.full(len(self.members), -np.inf)
        self.n_scenarios = 0

    def add_scenario(self, scenario):
        pts = self.inst.scenario_points(scenario)
        d = self.inst.space.matrix
        edge_costs = np.array([d[pts[i], pts[j]] for i, j in self.inst.graph.edges])
        np.maximum(self.max_cost, self.incidence @ edge_costs, out=self.max_cost)
        self.n_scenarios += 1

    def solve(self):
        if self.n_scenarios == 0:
            raise Infeasible("master needs at least one scenario")
        best = int(np.argmin(self.max_cost))  # first minimum: enumeration order
        return self.members[best], float(self.max_cost[best])


def solve_master(
    inst: LocUncInstance, scenarios, caps: EnumerationCaps = DEFAULT_CAPS
) -> Tuple[Tuple, float]:
    """Edge subset minimizing the worst cost over the given scenarios.

    An empty scenario list is treated as the single all-first-locations
    scenario.  Ties go to the first subset in enumeration order.
    """
    scenarios = list(scenarios)
    if not scenarios:
        scenarios = [tuple([0] * inst.graph.n)]
    master = _Master(inst, caps)
    for scenario in scenarios:
        master.add_scenario(scenario)
    return master.solve()


def cutting_plane(
    inst: LocUncInstance,
    initial_scenario: Optional[Tuple[int, ...]] = None,
    caps: EnumerationCaps = DEFAULT_CAPS,
    tol: float = CONVERGENCE_TOL,
):
    """Exact optimum of the min-max problem over the instance's family.

    Returns (edges, value, state).  Terminates because every iteration
    either stops or adds a scenario that is provably new, and the scenario
    universe is finite.
    """
    if inst.family is None:
        raise Infeasible("instance has no feasible family")
    state = CutState()
    master = _Master(inst, caps)
    start = time.perf_counter()

    scenario = initial_scenario if initial_scenario is not None else barycenter_scenario(inst)
    inst.check_scenario(tuple(scenario))
    seen = set()
    iteration = 0
    while True:
        iteration += 1
        scenario = tuple(scenario)
        assert scenario not in seen, "separation produced a duplicate scenario"
        seen.add(scenario)
        state.scenarios.append(scenario)
        master.add_scenario(scenario)

        incumbent, omega = master.solve()
        assert not state.log or omega >= state.log[-1].omega - tol
        result = worst_case_cost(inst, incumbent, caps)
        state.incumbent = incumbent
        state.omega = omega
        if result.value <= omega + tol:
            state.log.append(
                IterationRow(iteration, omega, result.value, None, time.perf_counter() - start)
            )
            return incumbent, result.value, state
        state.log.append(
            IterationRow(
                iteration, omega, result.value, result.witness, time.perf_counter() - start
            )
        )
        scenario = result.witness
