"""Solvers for min-max combinatorial optimization on spatial graphs whose
vertex locations are uncertain within finite candidate sets."""

from .errors import (
    CapExceeded,
    DisconnectedMetric,
    Infeasible,
    InvalidDecomposition,
    InvalidPoint,
    InvalidScale,
    InvalidSize,
    LocRobError,
    NotATree,
    ParseError,
    UnsupportedMetric,
)
from .metric import MetricSpace, all_pairs_shortest_paths, distance, is_ptolemaic
from .instance import (
    Assignment,
    ExplicitList,
    Graph,
    LocUncInstance,
    PMedian,
    STPath,
    SpanningTree,
    SteinerTree,
    barycenter,
    barycenter_scenario,
    max_pair_distance,
    normalize_edges,
    pessimistic_cost,
    scenario_cost,
    uset_diameter,
    worst_case_metric,
)
from .families import (
    DEFAULT_CAPS,
    EnumerationCaps,
    FamilyStats,
    enumerate_family,
    family_stats,
    solve_deterministic,
)
from .worst_case import (
    EvalResult,
    TreeDecomposition,
    build_nice_decomposition,
    decomposition_for,
    is_forest,
    validate_decomposition,
    worst_case_cost,
    worst_case_cost_bruteforce,
    worst_case_cost_tree,
    worst_case_cost_treewidth,
)
from .cutting_plane import CutState, cutting_plane, solve_master
from .approx import (
    CertifyResult,
    RatioBound,
    applicable_bound,
    certify_ratio,
    check_union_bounds,
    gen_center_trap,
    gen_tight_clique,
    gen_tight_cycle,
    gen_tight_path,
    gen_tight_star,
    solve_with_barycenters,
    solve_with_worst_distances,
    space_is_ptolemaic,
    tight_clique_ratio,
)
from .shortest_path import (
    SPResult,
    SPStats,
    path_profile,
    robust_shortest_path,
    robust_shortest_path_fptas,
)
from .reductions import (
    PartitionInput,
    best_split,
    expected_mst_optimum,
    expected_sp_optimum,
    gen_listcol_evalc,
    gen_maxcut_evalc,
    gen_partition_mst,
    gen_partition_sp,
    mst_scale_threshold,
    sp_scale_threshold,
)
from .adr import ConicModel, build_conic_model, dumps_model, evaluate_bound, serialize_model

__version__ = "0.1.0"
