"""Exact maximum weight stable sets in claw-free graphs.

>>> from clawfree import WeightedGraph, solve
>>> net = WeightedGraph([1, 1, 1, 5, 5, 5], [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)])
>>> solve(net).weight
15
"""

from .composition import CompositionError, max_weight_matching
from .graph import WeightedGraph, find_claw, find_net, remove_twins, reinsert_twins
from .io import ParseError, parse, render
from .lifting import LiftError, LiftLedger, LiftRecord, lift, unwind
from .pipeline import PipelineError
from .solver import NotClawFree, SolveResult, solve

__all__ = [
    "CompositionError",
    "LiftError",
    "LiftLedger",
    "LiftRecord",
    "NotClawFree",
    "ParseError",
    "PipelineError",
    "SolveResult",
    "WeightedGraph",
    "find_claw",
    "find_net",
    "lift",
    "max_weight_matching",
    "parse",
    "reinsert_twins",
    "remove_twins",
    "render",
    "solve",
    "unwind",
]
