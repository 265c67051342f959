"""Spanning tree congestion toolkit.

Exact solvers (brute force, treewidth DP), parameterized solvers (feedback
edge set, clique modulator, vertex integrity), a (1+eps)-approximation,
hardness-instance generators with witness trees, and text formats for
graphs, tree decompositions and solutions.
"""
from .decomposition import (
    NiceTreeDecomposition,
    TreeDecomposition,
    decompose,
    make_nice,
    validate_nice,
    validate_td,
)
from .dp import (
    WinWinResult,
    check_approx_invariant,
    default_nice_decomposition,
    solve_approx_tw,
    solve_cw_winwin,
    solve_exact_tw,
    solve_stc_tw,
)
from .errors import (
    BudgetExceededError,
    DisconnectedGraphError,
    FormatError,
    GraphError,
    InvalidCertificateError,
    InvalidDecompositionError,
    InvalidSpanningTreeError,
)
from .formats import (
    build_infeasible,
    build_solution,
    parse_gr,
    parse_solution,
    parse_td,
    solution_to_text,
    verify_solution,
    write_gr,
    write_td,
)
from .graph import (
    CongestionReport,
    DoubleWeightedGraph,
    Graph,
    SpanningTree,
    congestion_report,
    congestion_report_by_detours,
    connected_components,
    edge_key,
    find_biclique,
    induced_subgraph,
    spanning_tree_violation,
    stc_lower_bound_biclique,
    twin_classes,
)
from .oracle import (
    EnumerationBudget,
    count_spanning_trees,
    enumerate_spanning_trees,
    oracle_report,
    stc_exact,
)
from .reductions import (
    InstanceBundle,
    expand_double_weighted,
    expand_single_weighted,
    gen_3partition,
    gen_bsat,
    gen_grid,
    gen_ubp,
    grid_comb_tree,
    grid_corners,
    witness_tree,
    witness_tree_weighted,
)
from .structural import (
    ReductionTrace,
    dtc_bound_tree,
    dtc_congestion_bound,
    fes_value,
    ilp_minimize_max,
    lift_tree,
    reduce_graph,
    reconstruct,
    solve_dtc,
    solve_fes,
    solve_vi,
    vertex_integrity_set,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CongestionReport",
    "DisconnectedGraphError",
    "DoubleWeightedGraph",
    "EnumerationBudget",
    "FormatError",
    "Graph",
    "GraphError",
    "InstanceBundle",
    "InvalidCertificateError",
    "InvalidDecompositionError",
    "InvalidSpanningTreeError",
    "NiceTreeDecomposition",
    "ReductionTrace",
    "SpanningTree",
    "TreeDecomposition",
    "WinWinResult",
    "build_infeasible",
    "build_solution",
    "check_approx_invariant",
    "congestion_report",
    "congestion_report_by_detours",
    "connected_components",
    "count_spanning_trees",
    "decompose",
    "default_nice_decomposition",
    "dtc_bound_tree",
    "dtc_congestion_bound",
    "edge_key",
    "enumerate_spanning_trees",
    "expand_double_weighted",
    "expand_single_weighted",
    "fes_value",
    "find_biclique",
    "gen_3partition",
    "gen_bsat",
    "gen_grid",
    "gen_ubp",
    "grid_comb_tree",
    "grid_corners",
    "ilp_minimize_max",
    "induced_subgraph",
    "lift_tree",
    "make_nice",
    "oracle_report",
    "parse_gr",
    "parse_solution",
    "parse_td",
    "reconstruct",
    "reduce_graph",
    "solution_to_text",
    "solve_approx_tw",
    "solve_cw_winwin",
    "solve_dtc",
    "solve_exact_tw",
    "solve_fes",
    "solve_stc_tw",
    "solve_vi",
    "spanning_tree_violation",
    "stc_exact",
    "stc_lower_bound_biclique",
    "twin_classes",
    "validate_nice",
    "validate_td",
    "verify_solution",
    "vertex_integrity_set",
    "witness_tree",
    "witness_tree_weighted",
    "write_gr",
    "write_td",
]
