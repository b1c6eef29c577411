"""Batch experiment driver: generate instances, run the selected
algorithms, and emit CSV artifacts.

Emitted files: `records.csv` (one row per instance/algorithm),
`times.csv` (mean seconds per algorithm) and `costs_cdf.csv`, the
cumulative distribution of relative cost increases on a fixed grid
0, 0.5%, ..., 100%.  All CSV content is byte-stable for a fixed seed;
measured wall times are written as 0.0 unless `measure_time` is set,
because real timings cannot be reproducible.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..adr import build_conic_model, dumps_model, evaluate_bound
from ..approx import (
    gen_tight_clique,
    gen_tight_cycle,
    gen_tight_path,
    gen_tight_star,
    solve_with_barycenters,
    solve_with_worst_distances,
)
from ..cutting_plane import cutting_plane
from ..errors import LocRobError
from ..families import DEFAULT_CAPS, EnumerationCaps
from ..instance import LocUncInstance, STPath, pessimistic_cost
from ..shortest_path import robust_shortest_path, robust_shortest_path_fptas
from ..worst_case import worst_case_cost
from .generators import gen_layered_steiner, gen_roadnet

CDF_GRID = [k / 200.0 for k in range(201)]  # 0, 0.5%, ..., 100%

HEURISTIC_ALGOS = ("center", "dmax", "adr-emit", "fptas")


@dataclass
class ExperimentConfig:
    family: str                       # steiner-layered | roadnet | tight-{path,cycle,clique,star}
    algorithms: Tuple[str, ...]       # subset of exact, center, dmax, adr-emit, sp-dp, fptas
    trials: int
    seed: int
    sigma: int = 3
    delta: float = 0.5
    epsilon: float = 0.5
    layers: int = 1
    nodes: int = 12
    road_edges: int = 18
    clients: int = 3
    sites: int = 3
    p: int = 2
    size: int = 5                     # tight-family size parameter
    out_dir: Optional[str] = None
    caps: EnumerationCaps = field(default_factory=lambda: DEFAULT_CAPS)
    measure_time: bool = False
    cdf_metric: str = "gap"           # "gap" (true cost) or "certified" (pessimistic cost)

    def __post_init__(self):
        if self.sigma < 1 or self.delta < 0 or self.trials < 1:
            raise ValueError("invalid experiment parameters")
        if self.cdf_metric not in ("gap", "certified"):
            raise ValueError("cdf_metric must be 'gap' or 'certified'")


@dataclass
class RunRecord:
    instance_id: str
    algorithm: str
    cost: float
    exact: Optional[float]
    gap: Optional[float]
    bound: Optional[float]
    certified_gap: Optional[float]
    iterations: int
    wall_time: float
    error: str = ""


def _make_instance(config: ExperimentConfig, trial: int) -> LocUncInstance:
    seed = (config.seed, trial)
    if config.family == "steiner-layered":
        return gen_layered_steiner(config.layers, config.delta, config.sigma, seed)
    if config.family == "roadnet":
        inst, _, _ = gen_roadnet(
            config.nodes,
            config.road_edges,
            config.clients,
            config.sites,
            config.p,
            config.sigma,
            seed,
        )
        return inst
    if config.family == "tight-path":
        return gen_tight_path(config.size)[0]
    if config.family == "tight-cycle":
        return gen_tight_cycle(config.size)[0]
    if config.family == "tight-clique":
        return gen_tight_clique(config.size)[0]
    if config.family == "tight-star":
        return gen_tight_star(config.size)[0]
    raise ValueError(f"unknown experiment family '{config.family}'")


def _run_algorithm(config, inst, algo, exact_value):
    """Return (cost, bound, iterations, extra_artifact)."""
    caps = config.caps
    if algo == "exact":
        edges, value, state = cutting_plane(inst, caps=caps)
        return value, None, len(state.log), None
    if algo == "center":
        edges = solve_with_barycenters(inst, caps)
        return worst_case_cost(inst, edges, caps).value, pessimistic_cost(inst, edges), 1, None
    if algo == "dmax":
        edges = solve_with_worst_distances(inst, caps)
        return worst_case_cost(inst, edges, caps).value, pessimistic_cost(inst, edges), 1, None
    if algo == "adr-emit":
        model = build_conic_model(inst)
        edges = solve_with_worst_distances(inst, caps)
        bound = evaluate_bound(model, edges, inst=inst)
        return worst_case_cost(inst, edges, caps).value, bound, 1, dumps_model(model)
    if algo == "sp-dp":
        res = robust_shortest_path(inst, caps=caps)
        return res.value, None, 1, None
    if algo == "fptas":
        res = robust_shortest_path_fptas(inst, config.epsilon, caps)
        return res.value, None, 1, None
    raise ValueError(f"unknown algorithm '{algo}'")


def run_experiment(config: ExperimentConfig) -> List[RunRecord]:
    records: List[RunRecord] = []
    needs_exact = any(a != "exact" for a in config.algorithms)
    for trial in range(config.trials):
        inst = _make_instance(config, trial)
        instance_id = f"{config.family}-{trial}"
        if any(a in ("sp-dp", "fptas") for a in config.algorithms) and not isinstance(
            inst.family, STPath
        ):
            raise ValueError("sp-dp/fptas require a path-family experiment")

        exact_value = None
        if "exact" in config.algorithms or needs_exact:
            t0 = time.perf_counter()
            _, exact_value, state = cutting_plane(inst, caps=config.caps)
            exact_time = time.perf_counter() - t0
            if "exact" in config.algorithms:
                records.append(
                    RunRecord(
                        instance_id,
                        "exact",
                        exact_value,
                        exact_value,
                        0.0,
                        None,
                        None,
                        len(state.log),
                        exact_time,
                    )
                )

        for algo in config.algorithms:
            if algo == "exact":
                continue
            t0 = time.perf_counter()
            try:
                cost, bound, iters, artifact = _run_algorithm(config, inst, algo, exact_value)
            except LocRobError as exc:
                records.append(
                    RunRecord(instance_id, algo, float("nan"), exact_value, None, None,
                              None, 0, time.perf_counter() - t0, error=str(exc))
                )
                continue
            elapsed = time.perf_counter() - t0
            gap = None
            certified = None
            if exact_value is not None and exact_value > 1e-12:
                gap = cost / exact_value - 1.0
                if bound is not None:
                    certified = bound / exact_value - 1.0
            elif exact_value is not None:
                gap = 0.0 if cost <= 1e-12 else float("inf")
            records.append(
                RunRecord(instance_id, algo, cost, exact_value, gap, bound, certified,
                          iters, elapsed)
            )
            if artifact is not None and config.out_dir:
                path = os.path.join(config.out_dir, f"{instance_id}-model.txt")
                with open(path, "w") as fh:
                    fh.write(artifact)

    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        _write_records(config, records)
        _write_times(config, records)
        _write_cdf(config, records)
    return records


def _fmt(x):
    if x is None:
        return ""
    return repr(float(x))


def _write_records(config, records):
    lines = ["instance,algorithm,cost,exact,gap,bound,certified_gap,iterations,wall_time,error"]
    for r in records:
        t = repr(r.wall_time) if config.measure_time else "0.0"
        lines.append(
            f"{r.instance_id},{r.algorithm},{_fmt(r.cost)},{_fmt(r.exact)},{_fmt(r.gap)},"
            f"{_fmt(r.bound)},{_fmt(r.certified_gap)},{r.iterations},{t},{r.error}"
        )
    _dump(config, "records.csv", lines)


def _write_times(config, records):
    lines = ["algorithm,mean_seconds,runs"]
    for algo in config.algorithms:
        rows = [r for r in records if r.algorithm == algo and not r.error]
        mean = sum(r.wall_time for r in rows) / len(rows) if rows else 0.0
        t = repr(mean) if config.measure_time else "0.0"
        lines.append(f"{algo},{t},{len(rows)}")
    _dump(config, "times.csv", lines)


def _write_cdf(config, records):
    algos = [a for a in config.algorithms if a != "exact"]
    lines = ["x," + ",".join(algos)]
    for x in CDF_GRID:
        cells = []
        for algo in algos:
            rows = [r for r in records if r.algorithm == algo and not r.error]
            vals = [
                (r.certified_gap if config.cdf_metric == "certified" else r.gap)
                for r in rows
            ]
            vals = [v for v in vals if v is not None]
            if not vals:
                cells.append("")
                continue
            frac = 100.0 * sum(1 for v in vals if v <= x + 1e-12) / len(vals)
            cells.append(repr(frac))
        lines.append(repr(x) + "," + ",".join(cells))
    _dump(config, "costs_cdf.csv", lines)


def _dump(config, name, lines):
    with open(os.path.join(config.out_dir, name), "w") as fh:
        fh.write("\n".join(lines) + "\n")
