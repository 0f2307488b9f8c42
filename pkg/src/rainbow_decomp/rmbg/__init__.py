"""Robustly matchable bipartite graphs: matching, flow, verification and search."""

from rainbow_decomp.rmbg.flow import Arc, FlowNetwork, FlowResult, conservation_violations, max_flow
from rainbow_decomp.rmbg.graph import Rmbg, dump_rmbg, load_rmbg, rmbg_from_json, rmbg_to_json
from rainbow_decomp.rmbg.matching import HopcroftKarp, MatchingResult, bipartite_max_matching, max_matching_size
from rainbow_decomp.rmbg.robust import (
    ExhaustiveMode,
    RobustMatching,
    RobustnessVerdict,
    SampledMode,
    VerificationMode,
    default_mode,
    is_robustly_matchable,
    regularize,
    robust_match,
    search_rmbg,
    search_rmbg_sized,
)

__all__ = [
    "Arc",
    "FlowNetwork",
    "FlowResult",
    "conservation_violations",
    "max_flow",
    "Rmbg",
    "dump_rmbg",
    "load_rmbg",
    "rmbg_from_json",
    "rmbg_to_json",
    "HopcroftKarp",
    "MatchingResult",
    "bipartite_max_matching",
    "max_matching_size",
    "ExhaustiveMode",
    "RobustMatching",
    "RobustnessVerdict",
    "SampledMode",
    "VerificationMode",
    "default_mode",
    "is_robustly_matchable",
    "regularize",
    "robust_match",
    "search_rmbg",
    "search_rmbg_sized",
]
