import itertools

import numpy as np
import pytest

from locrob import (
    Graph,
    InvalidDecomposition,
    LocUncInstance,
    MetricSpace,
    NotATree,
    build_nice_decomposition,
    decomposition_for,
    gen_listcol_evalc,
    gen_maxcut_evalc,
    gen_tight_path,
    gen_tight_star,
    max_pair_distance,
    scenario_cost,
    validate_decomposition,
    worst_case_cost,
    worst_case_cost_bruteforce,
    worst_case_cost_tree,
    worst_case_cost_treewidth,
)

from conftest import (
    oracle_eval,
    oracle_maxcut,
    random_connected_graph,
    random_instance,
    rng_for,
)


def triangle_line_instance():
    """3-cycle with locations 0 / {0,1} / 1 on a line."""
    space = MetricSpace.from_points([[0.0], [1.0]])
    graph = Graph(3, [(0, 1), (1, 2), (0, 2)])
    return LocUncInstance(graph, space, [(0,), (0, 1), (1,)])


def test_bruteforce_singletons():
    rng = rng_for(31)
    inst = random_instance(rng, n=5, sigma=1)
    res = worst_case_cost_bruteforce(inst, inst.graph.edges)
    only = tuple([0] * 5)
    assert res.value == pytest.approx(scenario_cost(inst, only, inst.graph.edges))
    assert res.witness == only


def test_bruteforce_tight_path_value():
    inst, edges = gen_tight_path(4)
    res = worst_case_cost_bruteforce(inst, edges)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_bruteforce_triangle_line():
    inst = triangle_line_instance()
    res = worst_case_cost_bruteforce(inst, inst.graph.edges)
    assert res.value == pytest.approx(2.0, abs=1e-9)


def test_bruteforce_witness_is_lex_smallest():
    inst, edges = gen_tight_path(4)
    # both locations of vertex 1 attain the max; lex tie-break keeps index 0
    res = worst_case_cost_bruteforce(inst, edges)
    assert res.witness[1] == 0


def test_tree_dp_one_level_star():
    rng = rng_for(32)
    inst = random_instance(rng, n=5, sigma=3, extra=0)
    star = [(0, v) for v in range(1, 5) if inst.graph.has_edge(0, v)]
    if star:
        res = worst_case_cost_tree(inst, star)
        assert res.value == pytest.approx(oracle_eval(inst, star), abs=1e-9)


def test_tree_dp_tight_star_value():
    inst, edges = gen_tight_star(4)
    res = worst_case_cost_tree(inst, edges)
    assert res.value == pytest.approx(1.0 + 2.0 / 3.0, abs=1e-9)


def test_tree_dp_matches_bruteforce_on_random_forests():
    rng = rng_for(33)
    for _ in range(25):
        n = int(rng.integers(3, 9))
        inst = random_instance(rng, n=n, sigma=3, extra=0)
        # random sub-forest of the random tree
        k = int(rng.integers(1, inst.graph.m + 1))
        edges = tuple(inst.graph.edges[i] for i in rng.choice(inst.graph.m, k, replace=False))
        res = worst_case_cost_tree(inst, edges)
        assert res.value == pytest.approx(oracle_eval(inst, edges), abs=1e-9)
        assert scenario_cost(inst, res.witness, edges) == pytest.approx(res.value, abs=1e-9)


def test_tree_dp_rejects_cycles():
    inst = triangle_line_instance()
    with pytest.raises(NotATree):
        worst_case_cost_tree(inst, inst.graph.edges)


def test_tree_dp_root_choice_is_irrelevant():
    rng = rng_for(41)
    inst = random_instance(rng, n=6, sigma=3, extra=0)
    edges = inst.graph.edges
    values = {worst_case_cost_tree(inst, edges, root=r).value for r in range(6)}
    assert max(values) - min(values) <= 1e-9


def test_bruteforce_cap():
    from locrob import CapExceeded, EnumerationCaps

    rng = rng_for(42)
    inst = random_instance(rng, n=6, sigma=3)
    tight = EnumerationCaps(bruteforce_max_scenarios=2)
    with pytest.raises(CapExceeded):
        worst_case_cost_bruteforce(inst, inst.graph.edges, tight)


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------


def test_decomposition_of_tree_has_width_one():
    g = Graph(6, [(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)])
    dec = build_nice_decomposition(g)
    validate_decomposition(dec, range(6), g.edges)
    assert dec.width == 1


def test_decomposition_of_k4_has_width_three():
    g = Graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    dec = build_nice_decomposition(g)
    validate_decomposition(dec, range(4), g.edges)
    assert dec.width == 3


def test_decomposition_validates_on_random_graphs():
    rng = rng_for(34)
    for _ in range(20):
        n = int(rng.integers(3, 10))
        g = random_connected_graph(rng, n, extra=int(rng.integers(0, 4)))
        dec = build_nice_decomposition(g)
        validate_decomposition(dec, range(n), g.edges)


def test_validator_catches_missing_edge():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    dec = build_nice_decomposition(Graph(3, [(0, 1), (1, 2)]))
    with pytest.raises(InvalidDecomposition):
        validate_decomposition(dec, range(3), g.edges)


# ---------------------------------------------------------------------------
# treewidth DP
# ---------------------------------------------------------------------------


def test_treewidth_single_edge_equals_dmax():
    rng = rng_for(35)
    inst = random_instance(rng, n=4, sigma=3)
    e = inst.graph.edges[0]
    dec = decomposition_for(e, [e])
    res = worst_case_cost_treewidth(inst, [e], dec)
    assert res.value == pytest.approx(max_pair_distance(inst, *e), abs=1e-9)


def test_treewidth_matches_tree_dp_on_forests():
    rng = rng_for(36)
    for _ in range(15):
        n = int(rng.integers(3, 8))
        inst = random_instance(rng, n=n, sigma=3, extra=0)
        edges = inst.graph.edges
        dec = decomposition_for({v for e in edges for v in e}, edges)
        a = worst_case_cost_treewidth(inst, edges, dec)
        b = worst_case_cost_tree(inst, edges)
        assert a.value == pytest.approx(b.value, abs=1e-9)


def test_treewidth_matches_bruteforce_on_random_graphs():
    rng = rng_for(37)
    for _ in range(25):
        n = int(rng.integers(3, 9))
        inst = random_instance(rng, n=n, sigma=3, extra=int(rng.integers(1, 4)))
        edges = inst.graph.edges
        dec = decomposition_for(range(n), edges)
        res = worst_case_cost_treewidth(inst, edges, dec)
        assert res.value == pytest.approx(oracle_eval(inst, edges), abs=1e-9)
        assert scenario_cost(inst, res.witness, edges) == pytest.approx(res.value, abs=1e-9)
        assert res.stats["table_entries"] > 0


def test_treewidth_rejects_invalid_decomposition():
    inst = triangle_line_instance()
    dec = decomposition_for([0, 1], [(0, 1)])
    with pytest.raises(InvalidDecomposition):
        worst_case_cost_treewidth(inst, inst.graph.edges, dec)


# ---------------------------------------------------------------------------
# dispatch and equivalences
# ---------------------------------------------------------------------------


def test_dispatch_agrees_with_bruteforce_everywhere():
    rng = rng_for(38)
    for _ in range(25):
        n = int(rng.integers(2, 9))
        kind = ("euclidean", "graph", "matrix")[int(rng.integers(0, 3))]
        inst = random_instance(rng, n=n, sigma=3, kind=kind, extra=int(rng.integers(0, 4)))
        k = int(rng.integers(1, inst.graph.m + 1))
        edges = tuple(inst.graph.edges[i] for i in rng.choice(inst.graph.m, k, replace=False))
        res = worst_case_cost(inst, edges)
        assert res.value == pytest.approx(oracle_eval(inst, edges), abs=1e-9)
        assert scenario_cost(inst, res.witness, edges) == pytest.approx(res.value, abs=1e-9)


def test_maxcut_equivalence_small():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    inst = gen_maxcut_evalc(g)
    assert worst_case_cost(inst, g.edges).value == pytest.approx(2.0)  # triangle cut
    g4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    inst4 = gen_maxcut_evalc(g4)
    assert worst_case_cost(inst4, g4.edges).value == pytest.approx(4.0)  # bipartite


def test_maxcut_equivalence_random():
    rng = rng_for(39)
    for _ in range(15):
        n = int(rng.integers(3, 10))
        g = random_connected_graph(rng, n, extra=int(rng.integers(0, 5)))
        inst = gen_maxcut_evalc(g)
        assert worst_case_cost(inst, g.edges).value == pytest.approx(
            float(oracle_maxcut(g)), abs=1e-9
        )


def proper_list_coloring_exists(graph, lists):
    for combo in itertools.product(*lists):
        if all(combo[i] != combo[j] for i, j in graph.edges):
            return True
    return False


def test_listcol_equivalence():
    g = Graph(3, [(0, 1), (1, 2)])
    inst = gen_listcol_evalc(g, [(0, 1), (0, 1), (0, 1)])
    assert worst_case_cost(inst, g.edges).value == pytest.approx(2.0)  # colorable path

    k3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    inst = gen_listcol_evalc(k3, [(7,), (7,), (7,)])
    assert worst_case_cost(inst, k3.edges).value == pytest.approx(0.0)  # forced conflict


def test_listcol_equivalence_random():
    rng = rng_for(40)
    palette = list(range(4))
    for _ in range(15):
        n = int(rng.integers(3, 7))
        g = random_connected_graph(rng, n, extra=int(rng.integers(0, 3)))
        lists = [
            tuple(int(c) for c in rng.choice(palette, size=int(rng.integers(1, 4)), replace=False))
            for _ in range(n)
        ]
        inst = gen_listcol_evalc(g, lists)
        value = worst_case_cost(inst, g.edges).value
        colorable = proper_list_coloring_exists(g, lists)
        assert (abs(value - g.m) < 1e-9) == colorable
