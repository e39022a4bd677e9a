"""Greedy prefer-opposite and graph-joining generators for binary de Bruijn sequences."""

from .core import (
    FeedbackFunction,
    PeriodicSequence,
    RegisterState,
    evaluate,
    fsr_successor,
    is_de_bruijn,
    nonlinear_complexity,
    parse_function,
    rotation_canonical,
)
from .errors import (
    ComplexityTooLow,
    DimensionError,
    FamilyParameterError,
    GjpoError,
    InitialStateOffRootCycle,
    InvalidTree,
    LeafInitialState,
    NonPeriodicRun,
    NonsingularRequired,
    NonStandardFunction,
    NoRootedTrees,
    OrderLimitError,
    ParseError,
)
from .families import FamilySpec, materialize
from .gpo import (
    gpo_generate,
    gpo_guarantees_de_bruijn,
    gpo_unchecked,
    initial_state_candidates,
    reverse_engineer,
)
from .graphjoin import (
    enumerate_outputs,
    find_pcps,
    gjpo_generate,
    rooted_spanning_trees,
    simplified_graph,
    spanning_trees,
)
from .stategraph import build_state_graph, export_dot, leaves_of, unique_cycle_check

__version__ = "0.1.0"

__all__ = [
    "ComplexityTooLow",
    "DimensionError",
    "FamilyParameterError",
    "FamilySpec",
    "FeedbackFunction",
    "GjpoError",
    "InitialStateOffRootCycle",
    "InvalidTree",
    "LeafInitialState",
    "NoRootedTrees",
    "NonPeriodicRun",
    "NonStandardFunction",
    "NonsingularRequired",
    "OrderLimitError",
    "ParseError",
    "PeriodicSequence",
    "RegisterState",
    "build_state_graph",
    "enumerate_outputs",
    "evaluate",
    "export_dot",
    "find_pcps",
    "fsr_successor",
    "gjpo_generate",
    "gpo_generate",
    "gpo_guarantees_de_bruijn",
    "gpo_unchecked",
    "initial_state_candidates",
    "is_de_bruijn",
    "leaves_of",
    "materialize",
    "nonlinear_complexity",
    "parse_function",
    "reverse_engineer",
    "rooted_spanning_trees",
    "rotation_canonical",
    "simplified_graph",
    "spanning_trees",
    "unique_cycle_check",
]
