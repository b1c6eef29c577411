"""Command-line interface.

Verbs: gen, solve, evalc, certify, sp, adr-emit, experiment.  All numeric
output uses `repr`, so repeated runs with identical seeds and flags are
byte-identical (measured timings are opt-in via --timings).
"""

from __future__ import annotations

import argparse
import os
import sys

from ..adr import build_conic_model, evaluate_bound, serialize_model
from ..approx import (
    certify_ratio,
    gen_tight_clique,
    gen_tight_cycle,
    gen_tight_path,
    gen_tight_star,
    solve_with_barycenters,
    solve_with_worst_distances,
)
from ..cutting_plane import cutting_plane
from ..families import DEFAULT_CAPS, EnumerationCaps
from ..instance import normalize_edges, pessimistic_cost
from ..shortest_path import robust_shortest_path, robust_shortest_path_fptas
from ..worst_case import worst_case_cost
from .experiment import ExperimentConfig, run_experiment
from .formats import parse_instance, write_instance
from .generators import gen_layered_steiner, gen_roadnet


def _caps_from(args) -> EnumerationCaps:
    return EnumerationCaps(
        max_edges=args.cap_edges,
        pmedian_max_sites=args.cap_sites,
        bruteforce_max_scenarios=args.cap_scenarios,
    )


def _add_cap_flags(p):
    p.add_argument("--cap-edges", type=int, default=DEFAULT_CAPS.max_edges)
    p.add_argument("--cap-sites", type=int, default=DEFAULT_CAPS.pmedian_max_sites)
    p.add_argument(
        "--cap-scenarios", type=int, default=DEFAULT_CAPS.bruteforce_max_scenarios
    )


def _edges_arg(text):
    if not text:
        return None
    out = []
    for chunk in text.split(","):
        i, j = chunk.split("-")
        out.append((int(i), int(j)))
    return normalize_edges(out)


def cmd_gen(args):
    if args.family == "steiner-layered":
        inst = gen_layered_steiner(args.layers, args.delta, args.sigma, args.seed)
    elif args.family == "roadnet":
        inst, _, _ = gen_roadnet(
            args.nodes, args.edges, args.clients, args.sites, args.p, args.sigma, args.seed
        )
    elif args.family == "tight-path":
        inst = gen_tight_path(args.size)[0]
    elif args.family == "tight-cycle":
        inst = gen_tight_cycle(args.size)[0]
    elif args.family == "tight-clique":
        inst = gen_tight_clique(args.size)[0]
    elif args.family == "tight-star":
        inst = gen_tight_star(args.size)[0]
    else:
        raise SystemExit(f"unknown family {args.family}")
    write_instance(inst, args.out)
    print(f"wrote {args.out} ({inst.graph.n} vertices, {inst.graph.m} edges)")


def cmd_solve(args):
    inst = parse_instance(args.infile)
    caps = _caps_from(args)
    if args.algo == "exact":
        edges, value, state = cutting_plane(inst, caps=caps)
        if args.log:
            with open(args.log, "w") as fh:
                fh.write(state.log_csv(include_times=args.timings))
        print(f"value {value!r}")
        print("edges " + ",".join(f"{i}-{j}" for i, j in edges))
        print(f"iterations {len(state.log)}")
        return
    if args.algo == "center":
        edges = solve_with_barycenters(inst, caps)
    elif args.algo == "dmax":
        edges = solve_with_worst_distances(inst, caps)
    else:
        raise SystemExit(f"unknown algorithm {args.algo}")
    value = worst_case_cost(inst, edges, caps).value
    print(f"value {value!r}")
    print("edges " + ",".join(f"{i}-{j}" for i, j in edges))


def cmd_evalc(args):
    inst = parse_instance(args.infile)
    edges = _edges_arg(args.edges) or inst.graph.edges
    result = worst_case_cost(inst, edges, _caps_from(args))
    print(f"value {result.value!r}")
    print("witness " + ",".join(map(str, result.witness)))


def cmd_certify(args):
    inst = parse_instance(args.infile)
    caps = _caps_from(args)
    if args.algo == "center":
        edges = solve_with_barycenters(inst, caps)
    else:
        edges = solve_with_worst_distances(inst, caps)
    res = certify_ratio(inst, edges, caps)
    print(f"observed {res.observed!r}")
    print(f"bound {res.bound.value!r} ({res.bound.structure}, {res.bound.hypothesis})")
    print(f"ok {res.ok}")


def cmd_sp(args):
    inst = parse_instance(args.infile)
    caps = _caps_from(args)
    if args.epsilon is None:
        res = robust_shortest_path(inst, caps=caps)
    else:
        res = robust_shortest_path_fptas(inst, args.epsilon, caps)
    print(f"value {res.value!r}")
    print("path " + "-".join(map(str, res.path)))
    if args.stats_out:
        with open(args.stats_out, "w") as fh:
            fh.write(res.stats.CSV_HEADER + "\n")
            fh.write(res.stats.as_row() + "\n")


def cmd_adr_emit(args):
    inst = parse_instance(args.infile)
    model = build_conic_model(inst)
    serialize_model(model, args.out)
    counts = model.counts()
    print(f"wrote {args.out}")
    print(
        "counts "
        + " ".join(f"{k}={v}" for k, v in sorted(counts.items()))
    )
    if args.bound_support:
        edges = _edges_arg(args.bound_support)
        print(f"bound {evaluate_bound(model, edges, inst=inst)!r}")


def cmd_experiment(args):
    config = ExperimentConfig(
        family=args.family,
        algorithms=tuple(args.algos.split(",")),
        trials=args.trials,
        seed=args.seed,
        sigma=args.sigma,
        delta=args.delta,
        epsilon=args.epsilon,
        layers=args.layers,
        nodes=args.nodes,
        road_edges=args.edges,
        clients=args.clients,
        sites=args.sites,
        p=args.p,
        size=args.size,
        out_dir=args.out_dir,
        caps=_caps_from(args),
        measure_time=args.timings,
        cdf_metric=args.cdf_metric,
    )
    os.makedirs(args.out_dir, exist_ok=True)
    records = run_experiment(config)
    errors = sum(1 for r in records if r.error)
    print(f"wrote {args.out_dir} ({len(records)} records, {errors} errors)")


def _add_family_flags(p):
    p.add_argument("--family", required=True)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--sigma", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=12)
    p.add_argument("--edges", type=int, default=18)
    p.add_argument("--clients", type=int, default=3)
    p.add_argument("--sites", type=int, default=3)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--size", type=int, default=5)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="locrob")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    _add_family_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algo", default="exact", choices=["exact", "center", "dmax"])
    p.add_argument("--log")
    p.add_argument("--timings", action="store_true")
    _add_cap_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("evalc", help="adversarial evaluation of an edge set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--edges", default="", help="comma list like 0-1,1-2 (default: all)")
    _add_cap_flags(p)
    p.set_defaults(func=cmd_evalc)

    p = sub.add_parser("certify", help="heuristic ratio certification")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algo", default="dmax", choices=["center", "dmax"])
    _add_cap_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sp", help="robust shortest path (exact or approximate)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--stats-out")
    _add_cap_flags(p)
    p.set_defaults(func=cmd_sp)

    p = sub.add_parser("adr-emit", help="emit the conic model for external solvers")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--bound-support", default="")
    _add_cap_flags(p)
    p.set_defaults(func=cmd_adr_emit)

    p = sub.add_parser("experiment", help="batch experiments with CSV output")
    _add_family_flags(p)
    p.add_argument("--algos", default="exact,center,dmax")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--timings", action="store_true")
    p.add_argument("--cdf-metric", default="gap", choices=["gap", "certified"])
    _add_cap_flags(p)
    p.set_defaults(func=cmd_experiment)

    args = parser.parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
