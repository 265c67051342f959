"""Parameterized solvers: feedback edge number, distance to clique, vertex
integrity."""

from .fes import ReductionTrace, fes_value, lift_tree, reconstruct, reduce_graph, solve_fes
from .dtc import dtc_bound_tree, dtc_congestion_bound, small_case_threshold, solve_dtc
from .vi import (
    ComponentType,
    ForestType,
    Signature,
    enumerate_types,
    ilp_minimize_max,
    solve_vi,
    tree_from_signature,
    vertex_integrity_set,
)

__all__ = [
    "ComponentType",
    "ForestType",
    "ReductionTrace",
    "Signature",
    "dtc_bound_tree",
    "dtc_congestion_bound",
    "enumerate_types",
    "fes_value",
    "ilp_minimize_max",
    "lift_tree",
    "reconstruct",
    "reduce_graph",
    "small_case_threshold",
    "solve_dtc",
    "solve_fes",
    "solve_vi",
    "tree_from_signature",
    "vertex_integrity_set",
]
