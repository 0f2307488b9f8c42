"""Rainbow perfect matchings by conflict-reducing switches, with an exhaustive fallback."""

import random
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.matchings.bipartite import ColouredBipartite
from rainbow_decomp.rmbg.matching import HopcroftKarp
from rainbow_decomp.settings import get_settings
from rainbow_decomp.utils.errors import InvalidArgumentError, NotFoundError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)

# Instances this small are settled exactly when local search fails.
EXHAUSTIVE_FALLBACK_MAX_N = 8


class RainbowMatching(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    pairs: Dict[int, int] = Field(..., description="left vertex -> right vertex")
    colours: List[int]
    method: Literal["local-search", "exhaustive"]
    restarts: int = 0
    trace: List[List[int]] = Field(
        default_factory=list, description="Conflict count after each accepted switch, per run"
    )


def _conflicts(counts: Dict[int, int]) -> int:
    return sum(c - 1 for c in counts.values() if c > 1)


def exhaustive_rainbow_matching(g: ColouredBipartite) -> Optional[Dict[int, int]]:
    """Backtracking over left vertices; returns a rainbow perfect matching or None."""
    adj = g.adjacency()
    n = g.n
    used_right = [False] * n
    used_colours: set = set()
    choice = [-1] * n
    pos = [0] * n
    i = 0
    while 0 <= i < n:
        if pos[i] > 0:
            prev = choice[i]
            used_right[prev] = False
            used_colours.discard(g.colour_of(g.left[i], g.right[prev]))
        advanced = False
        while pos[i] < len(adj[i]):
            j = adj[i][pos[i]]
            pos[i] += 1
            c = g.colour_of(g.left[i], g.right[j])
            if not used_right[j] and c not in used_colours:
                used_right[j] = True
                used_colours.add(c)
                choice[i] = j
                advanced = True
                break
        if advanced:
            i += 1
            if i < n:
                pos[i] = 0
        else:
            pos[i] = 0
            i -= 1
    if i < 0:
        return None
    return {g.left[k]: g.right[choice[k]] for k in range(n)}


def _random_perfect_matching(g: ColouredBipartite, adj: List[List[int]], rng: random.Random) -> Optional[List[int]]:
    shuffled = [rng.sample(row, len(row)) for row in adj]
    hk = HopcroftKarp(g.n, g.n, shuffled)
    if hk.run() < g.n:
        return None
    return list(hk.match_left)


def _local_search(
    g: ColouredBipartite,
    adj: List[List[int]],
    match: List[int],
    rng: random.Random,
    steps: int,
    stall_limit: int,
) -> tuple:
    n = g.n
    edge_set = {(i, j) for i, row in enumerate(adj) for j in row}
    colour = {(i, j): g.colour_of(g.left[i], g.right[j]) for i, j in edge_set}
    counts: Dict[int, int] = {}
    for i in range(n):
        c = colour[(i, match[i])]
        counts[c] = counts.get(c, 0) + 1
    current = _conflicts(counts)
    trace = [current]
    stall = 0
    used = 0
    while current > 0 and used < steps and stall < stall_limit:
        used += 1
        conflicted = [i for i in range(n) if counts[colour[(i, match[i])]] > 1]
        i = rng.choice(conflicted)
        k = rng.randrange(n)
        if k == i or (i, match[k]) not in edge_set or (k, match[i]) not in edge_set:
            stall += 1
            continue
        old = (colour[(i, match[i])], colour[(k, match[k])])
        new = (colour[(i, match[k])], colour[(k, match[i])])
        affected = set(old) | set(new)
        before = sum(max(0, counts.get(c, 0) - 1) for c in affected)
        for c in old:
            counts[c] -= 1
        for c in new:
            counts[c] = counts.get(c, 0) + 1
        after = sum(max(0, counts.get(c, 0) - 1) for c in affected)
        if after <= before:
            match[i], match[k] = match[k], match[i]
            stall = 0 if after < before else stall + 1
            current += after - before
            trace.append(current)
        else:
            for c in new:
                counts[c] -= 1
            for c in old:
                counts[c] += 1
            stall += 1
    return current, trace, used


def rainbow_perfect_matching(
    g: ColouredBipartite,
    colour_cap: int,
    budget: Optional[int] = None,
    seed: int = 0,
) -> RainbowMatching:
    """Rainbow perfect matching of a balanced coloured bipartite graph.

    Starts from a perfect matching found by augmenting paths and applies
    random switches along alternating 4-cycles that never increase the number
    of colour conflicts; sideways moves are allowed and a stalled run restarts
    from a fresh random perfect matching. For n ≤ 8 a failed search falls back
    to exhaustive backtracking, so the verdict there is exact.

    Args:
        g: The bipartite graph
        colour_cap: Maximum number of edges any colour may have
        budget: Total switch attempts (default from settings)
        seed: RNG seed

    Raises:
        InvalidArgumentError: If some colour appears more than ``colour_cap`` times
        NotFoundError: If g has no perfect matching or the budget is exhausted
    """
    counts = g.colour_counts()
    heavy = {c: k for c, k in counts.items() if k > colour_cap}
    if heavy:
        raise InvalidArgumentError(
            message=f"{len(heavy)} colours exceed the cap of {colour_cap} edges",
            details={"colours": dict(sorted(heavy.items())[:10])},
        )
    n = g.n
    if n == 0:
        return RainbowMatching(pairs={}, colours=[], method="local-search")

    budget = budget or get_settings().budgets.switch_budget
    rng = random.Random(seed)
    adj = g.adjacency()
    stall_limit = max(50, 20 * n)
    traces: List[List[int]] = []
    remaining = budget
    restarts = 0
    while remaining > 0:
        match = _random_perfect_matching(g, adj, rng)
        if match is None:
            raise NotFoundError(
                message=f"Graph has no perfect matching (n={n})", details={"n": n, "perfect_matching": False}
            )
        conflicts, trace, used = _local_search(g, adj, match, rng, remaining, stall_limit)
        traces.append(trace)
        remaining -= max(used, 1)
        if conflicts == 0:
            pairs = {g.left[i]: g.right[j] for i, j in enumerate(match)}
            return RainbowMatching(
                pairs=pairs,
                colours=[g.colour_of(a, b) for a, b in pairs.items()],  # type: ignore[misc]
                method="local-search",
                restarts=restarts,
                trace=traces,
            )
        restarts += 1

    if n <= EXHAUSTIVE_FALLBACK_MAX_N:
        pairs = exhaustive_rainbow_matching(g)
        if pairs is not None:
            return RainbowMatching(
                pairs=pairs,
                colours=[g.colour_of(a, b) for a, b in pairs.items()],  # type: ignore[misc]
                method="exhaustive",
                restarts=restarts,
                trace=traces,
            )
        raise NotFoundError(
            message=f"No rainbow perfect matching exists (exhaustive search, n={n})",
            details={"n": n, "search": "exhaustive"},
        )

    logger.info(
        "Rainbow matching search exhausted",
        n=n,
        budget=budget,
        restarts=restarts,
        operation="rainbow_perfect_matching",
    )
    raise NotFoundError(
        message=f"No rainbow perfect matching found within {budget} switches (n={n})",
        details={"n": n, "search": "local", "budget": budget, "restarts": restarts},
    )


__all__ = [
    "EXHAUSTIVE_FALLBACK_MAX_N",
    "RainbowMatching",
    "exhaustive_rainbow_matching",
    "rainbow_perfect_matching",
]
