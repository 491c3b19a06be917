"""Orientations of mixed graphs that maximize the number of reachable pairs."""

from .errors import CapExceeded, GraphError, ParseError, ReachOrientError, UnsupportedInstance
from .graph_core import (
    MixedGraph,
    Orientation,
    WeightedInstance,
    contract_set,
    in_out_sets,
    mixed_cycle_exists,
    reach_closure,
    scc,
    score,
    score_weighted,
    splice,
    undirected_components,
)

from .instances import parse_instance, serialize_instance
from .reduce import contract_to_wammro, lift_orientation
from .solvers import brute_force, lower_bound_orientation, solve_approx, solve_exact

__version__ = "0.1.0"
