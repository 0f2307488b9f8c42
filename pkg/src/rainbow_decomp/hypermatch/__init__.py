"""Hypergraphs, nibble matchings and the rainbow-cycle encoding."""

from rainbow_decomp.hypermatch.cycles import (
    CycleHypergraph,
    CycleLayout,
    ExhaustiveEnumeration,
    RainbowCycle,
    SampledEnumeration,
    build_cycle_hypergraph,
    extract_disjoint_families,
)
from rainbow_decomp.hypermatch.hypergraph import (
    DegreeStats,
    Hypergraph,
    degree_stats,
    dump_hypergraph,
    hypergraph_from_json,
    hypergraph_to_json,
    load_hypergraph,
    random_uniform_hypergraph,
)
from rainbow_decomp.hypermatch.matching import (
    GammaCheck,
    MatchingReport,
    build_matching_report,
    check_gamma_perfect,
    greedy_matching,
    nibble_matching,
)

__all__ = [
    "CycleHypergraph",
    "CycleLayout",
    "ExhaustiveEnumeration",
    "RainbowCycle",
    "SampledEnumeration",
    "build_cycle_hypergraph",
    "extract_disjoint_families",
    "DegreeStats",
    "Hypergraph",
    "degree_stats",
    "dump_hypergraph",
    "hypergraph_from_json",
    "hypergraph_to_json",
    "load_hypergraph",
    "random_uniform_hypergraph",
    "GammaCheck",
    "MatchingReport",
    "build_matching_report",
    "check_gamma_perfect",
    "greedy_matching",
    "nibble_matching",
]
