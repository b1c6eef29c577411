from math import ceil

import numpy as np
import pytest

from locrob import (
    Graph,
    Infeasible,
    LocUncInstance,
    MetricSpace,
    STPath,
    gen_tight_path,
    max_pair_distance,
    path_profile,
    robust_shortest_path,
    robust_shortest_path_fptas,
    worst_case_cost,
)

from conftest import oracle_eval, oracle_simple_paths, random_instance, rng_for


def sp_instance(rng, n=6, sigma=3, extra=3, kind="euclidean"):
    inst = random_instance(rng, n=n, sigma=sigma, extra=extra, kind=kind)
    return LocUncInstance(inst.graph, inst.space, inst.usets, STPath(0, n - 1))


def oracle_robust_sp(inst):
    fam = inst.family
    paths = oracle_simple_paths(inst.graph, fam.s, fam.t)
    best = None
    for p in paths:
        edges = list(zip(p, p[1:]))
        val = oracle_eval(inst, edges)
        if best is None or val < best - 1e-12:
            best = val
    return best


def test_single_edge_value_is_pair_maximum():
    rng = rng_for(71)
    base = random_instance(rng, n=2, sigma=3, extra=0)
    inst = LocUncInstance(base.graph, base.space, base.usets, STPath(0, 1))
    res = robust_shortest_path(inst)
    assert res.path == (0, 1)
    assert res.value == pytest.approx(max_pair_distance(inst, 0, 1), abs=1e-9)


def test_tight_path_as_sp_instance():
    base, edges = gen_tight_path(3)
    inst = LocUncInstance(base.graph, base.space, base.usets, STPath(0, 2))
    res = robust_shortest_path(inst)
    assert res.value == pytest.approx(1.0, abs=1e-9)
    assert res.edges == edges


def test_exact_dp_matches_path_enumeration():
    rng = rng_for(72)
    for trial in range(25):
        n = int(rng.integers(3, 8))
        inst = sp_instance(rng, n=n, sigma=3, extra=int(rng.integers(0, 4)))
        res = robust_shortest_path(inst)
        expect = oracle_robust_sp(inst)
        assert res.value == pytest.approx(expect, abs=1e-9)
        # returned path is simple and its cost equals the reported value
        assert len(set(res.path)) == len(res.path)
        assert worst_case_cost(inst, res.edges).value == pytest.approx(res.value, abs=1e-9)


def test_exact_dp_accepts_non_metric_matrix():
    rng = rng_for(73)
    inst = sp_instance(rng, n=5, sigma=2)
    # perturbed matrix violating the triangle inequality on purpose
    d = inst.space.matrix.copy()
    d[0, 1] = d[1, 0] = d[0, 1] * 10 + 5.0
    res = robust_shortest_path(inst, dist=d)
    # oracle under the same matrix
    paths = oracle_simple_paths(inst.graph, 0, 4)
    best = min(
        max(path_profile(inst, p, d)) for p in paths
    )
    assert res.value == pytest.approx(float(best), abs=1e-9)


def test_disconnected_raises():
    space = MetricSpace.from_points([[0.0], [1.0]])
    graph = Graph(4, [(0, 1), (2, 3)])
    inst = LocUncInstance(graph, space, [(0,), (1,), (0,), (1,)], STPath(0, 3))
    with pytest.raises(Infeasible):
        robust_shortest_path(inst)


def test_fptas_within_factor():
    rng = rng_for(74)
    for eps in (0.5, 0.1):
        for trial in range(20):
            n = int(rng.integers(3, 8))
            inst = sp_instance(rng, n=n, sigma=3, extra=int(rng.integers(0, 4)))
            opt = oracle_robust_sp(inst)
            res = robust_shortest_path_fptas(inst, eps)
            assert res.value <= (1 + eps) * opt + 1e-9
            assert res.value >= opt - 1e-9


def test_fptas_deterministic_sets_exact():
    rng = rng_for(75)
    inst = sp_instance(rng, n=6, sigma=1)
    res = robust_shortest_path_fptas(inst, 1.0)
    exact = robust_shortest_path(inst)
    assert res.value == pytest.approx(exact.value, abs=1e-9)


def test_fptas_value_counter_bound():
    rng = rng_for(76)
    for eps in (0.5, 0.1):
        for _ in range(10):
            n = int(rng.integers(3, 7))
            inst = sp_instance(rng, n=n, sigma=2, extra=2)
            res = robust_shortest_path_fptas(inst, eps)
            eps_prime = eps / (2 * n)
            assert res.stats.n_values <= n + 2 + ceil(1.0 / eps_prime)


def test_fptas_rounding_sandwich():
    rng = rng_for(77)
    inst = sp_instance(rng, n=5, sigma=3)
    from locrob.approx import solve_with_worst_distances
    from locrob.shortest_path import _edges_to_path

    edges = solve_with_worst_distances(inst)
    path = _edges_to_path(edges, 0, 4)
    upper = float(path_profile(inst, path, inst.space.matrix).max())
    eps = 0.25
    eps_prime = eps / (2 * inst.graph.n)
    unit = eps_prime * upper
    d = inst.space.matrix
    steps = np.ceil(d / unit - 1e-9)
    steps = np.where(steps * unit < d, steps + 1, steps)
    rounded = steps * unit
    assert np.all(rounded >= d - 1e-12)
    assert np.all(rounded <= d + unit + 1e-12)
    assert np.array_equal(steps, np.round(steps))  # integer grid


def test_stats_row_format():
    rng = rng_for(78)
    inst = sp_instance(rng, n=5, sigma=2)
    res = robust_shortest_path(inst)
    row = res.stats.as_row()
    assert row.count(",") == res.stats.CSV_HEADER.count(",")
    assert res.stats.n_profiles >= 1
    assert res.stats.table_bytes > 0
