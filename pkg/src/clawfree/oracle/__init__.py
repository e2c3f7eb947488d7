"""Ground truth for the solver: brute-force engines, checkers, generators."""

from .brute import brute_matching, brute_mwss, exhaustive_mwss
from .checks import (
    as_mate,
    basic_violation,
    canonical_violation,
    check_basic,
    check_canonical,
    check_liftable,
    is_m_clique,
    is_maximal_stable,
    is_normal_direct,
    is_strongly_bisimplicial,
    is_weakly_normal_direct,
    liftable_violation,
)
from .generators import GenModel, SplitMix64, circular_interval_graph, gen_instance, line_graph

__all__ = [
    "GenModel",
    "SplitMix64",
    "as_mate",
    "basic_violation",
    "brute_matching",
    "brute_mwss",
    "canonical_violation",
    "check_basic",
    "check_canonical",
    "check_liftable",
    "circular_interval_graph",
    "exhaustive_mwss",
    "gen_instance",
    "is_m_clique",
    "is_maximal_stable",
    "is_normal_direct",
    "is_strongly_bisimplicial",
    "is_weakly_normal_direct",
    "liftable_violation",
    "line_graph",
]
