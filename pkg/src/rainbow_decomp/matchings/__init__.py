"""Quasirandom bipartite graphs and rainbow perfect matchings."""

from rainbow_decomp.matchings.bipartite import (
    ColouredBipartite,
    QuasirandomReport,
    QuasirandomWitness,
    is_quasirandom,
    random_coloured_bipartite,
)
from rainbow_decomp.matchings.rainbow import (
    RainbowMatching,
    exhaustive_rainbow_matching,
    rainbow_perfect_matching,
)
from rainbow_decomp.matchings.routine import (
    RoutineResult,
    RoutineStep,
    greedy_disjoint_rainbow_pms,
    routine_preconditions,
)

__all__ = [
    "ColouredBipartite",
    "QuasirandomReport",
    "QuasirandomWitness",
    "is_quasirandom",
    "random_coloured_bipartite",
    "RainbowMatching",
    "exhaustive_rainbow_matching",
    "rainbow_perfect_matching",
    "RoutineResult",
    "RoutineStep",
    "greedy_disjoint_rainbow_pms",
    "routine_preconditions",
]
