"""Random graph lifts, permutation groups and the experiments that connect them."""

__version__ = "0.1.0"

from .errors import LiftLabError
from .graph import MultiGraph, betti_number, make_family, parse_family, spanning_tree
from .perm import GroupHandle, Permutation, compose, identity, inverse, random_permutation
from .wreath import WreathElement, random_wreath, wreath_act, wreath_compose, wreath_inverse
from .lift import (
    LiftAssignment,
    LiftedGraph,
    Walk,
    build_lift,
    lift_walk,
    random_lift,
    walk_product,
    walk_subgroup_generators,
)
from .analysis import edge_connectivity, edge_expansion_exact, is_connected

__all__ = [
    "__version__",
    "LiftLabError",
    "MultiGraph",
    "betti_number",
    "make_family",
    "parse_family",
    "spanning_tree",
    "GroupHandle",
    "Permutation",
    "compose",
    "identity",
    "inverse",
    "random_permutation",
    "WreathElement",
    "random_wreath",
    "wreath_act",
    "wreath_compose",
    "wreath_inverse",
    "LiftAssignment",
    "LiftedGraph",
    "Walk",
    "build_lift",
    "lift_walk",
    "random_lift",
    "walk_product",
    "walk_subgroup_generators",
    "edge_connectivity",
    "edge_expansion_exact",
    "is_connected",
]
