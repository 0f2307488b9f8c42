"""Robust matchability: verification, matching, randomized search and regularization."""

import random
from itertools import combinations
from math import comb
from typing import Annotated, Dict, List, Literal, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.rmbg.flow import Arc, FlowNetwork, max_flow
from rainbow_decomp.rmbg.graph import Rmbg
from rainbow_decomp.rmbg.matching import HopcroftKarp, max_matching_size
from rainbow_decomp.settings import get_settings
from rainbow_decomp.utils.errors import (
    BudgetExceededError,
    InfeasibleError,
    InternalInconsistencyError,
    InvalidArgumentError,
    RefutationError,
    SearchFailedError,
)
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)


class ExhaustiveMode(BaseModel):
    """Check every admissible Y′; ``limit`` caps the number of subsets."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["exhaustive"] = "exhaustive"
    limit: Optional[int] = Field(default=None, gt=0)


class SampledMode(BaseModel):
    """Check ``draws`` uniform Y′; draw j uses the RNG stream (seed, j)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["sampled"] = "sampled"
    draws: int = Field(..., gt=0)
    seed: int = Field(default=0, ge=0)


VerificationMode = Annotated[Union[ExhaustiveMode, SampledMode], Field(discriminator="kind")]


class RobustnessVerdict(BaseModel):
    """Outcome of a robust-matchability check."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    status: Literal["proven", "refuted", "sampled-pass"]
    witness: Optional[List[int]] = Field(default=None, description="A failing Y′ when refuted")
    checked: int = 0
    mode: Literal["exhaustive", "sampled"]


class RobustMatching(BaseModel):
    """Perfect matching of H[X, Y′ ∪ Z]; right indices follow the Rmbg layout."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    y_prime: List[int]
    pairs: Dict[int, int] = Field(..., description="x -> right vertex")


def _restricted_rows(h: Rmbg, y_prime: Sequence[int]) -> List[List[int]]:
    allowed = set(y_prime)
    y = h.y_size
    return [[r for r in row if r >= y or r in allowed] for row in h.adjacency]


def _saturates_x(h: Rmbg, y_prime: Sequence[int]) -> bool:
    return max_matching_size(h.x_size, h.right_size, _restricted_rows(h, y_prime)) == h.x_size


def is_robustly_matchable(h: Rmbg, mode: Optional[VerificationMode] = None) -> RobustnessVerdict:
    """Check that H[X, Y′ ∪ Z] has a perfect matching for admissible Y′.

    Args:
        h: Graph to check
        mode: ExhaustiveMode (default) or SampledMode

    Returns:
        proven / refuted (with a failing Y′) / sampled-pass

    Raises:
        BudgetExceededError: If exhaustive mode would exceed its subset limit
    """
    mode = mode or ExhaustiveMode()
    k = h.deficiency
    if k > h.y_size:
        # No admissible Y′ exists.
        return RobustnessVerdict(status="proven", checked=0, mode=mode.kind)

    if isinstance(mode, ExhaustiveMode):
        limit = mode.limit or get_settings().budgets.exhaustive_subset_limit
        total = comb(h.y_size, k)
        if total > limit:
            raise BudgetExceededError(
                message=f"C({h.y_size},{k}) = {total} subsets exceed the exhaustive limit {limit}",
                details={"subsets": total, "limit": limit},
            )
        for checked, combo in enumerate(combinations(range(h.y_size), k), start=1):
            if not _saturates_x(h, combo):
                return RobustnessVerdict(
                    status="refuted", witness=list(combo), checked=checked, mode="exhaustive"
                )
        return RobustnessVerdict(status="proven", checked=total, mode="exhaustive")

    for j in range(mode.draws):
        rng = np.random.default_rng([mode.seed, j])
        combo = sorted(rng.choice(h.y_size, size=k, replace=False).tolist()) if k else []
        if not _saturates_x(h, combo):
            return RobustnessVerdict(status="refuted", witness=combo, checked=j + 1, mode="sampled")
    return RobustnessVerdict(status="sampled-pass", checked=mode.draws, mode="sampled")


def default_mode(h: Rmbg, seed: int = 0) -> VerificationMode:
    """Exhaustive when within the subset limit, else sampled with the default draw count."""
    budgets = get_settings().budgets
    if h.deficiency > h.y_size or comb(h.y_size, h.deficiency) <= budgets.exhaustive_subset_limit:
        return ExhaustiveMode()
    return SampledMode(draws=budgets.sampled_draws, seed=seed)


def robust_match(h: Rmbg, y_prime: Sequence[int]) -> RobustMatching:
    """Perfect matching of H[X, Y′ ∪ Z].

    Raises:
        InvalidArgumentError: If Y′ has the wrong size or leaves Y
        RefutationError: If no perfect matching exists; details carry the Hall
            violator (left vertices alternating-reachable from a free vertex)
            and its neighbourhood
    """
    chosen = sorted(set(y_prime))
    if len(chosen) != len(y_prime) or len(chosen) != h.deficiency:
        raise InvalidArgumentError(
            message=f"Y′ must be {h.deficiency} distinct vertices of Y, got {list(y_prime)}",
            details={"y_prime": list(y_prime), "expected_size": h.deficiency},
        )
    if chosen and (chosen[0] < 0 or chosen[-1] >= h.y_size):
        raise InvalidArgumentError(
            message=f"Y′ must lie in [0, {h.y_size - 1}]", details={"y_prime": chosen}
        )

    rows = _restricted_rows(h, chosen)
    hk = HopcroftKarp(h.x_size, h.right_size, rows)
    size = hk.run()
    if size < h.x_size:
        left_seen, _ = hk.alternating_reach()
        violator = [x for x in range(h.x_size) if left_seen[x]]
        neighbourhood = sorted({r for x in violator for r in rows[x]})
        raise RefutationError(
            message=(
                f"No perfect matching for Y′={chosen}: {len(violator)} X-vertices "
                f"see only {len(neighbourhood)} vertices"
            ),
            details={"y_prime": chosen, "hall_violator": violator, "neighbourhood": neighbourhood},
        )
    return RobustMatching(y_prime=chosen, pairs={x: r for x, r in enumerate(hk.match_left)})


def _random_candidate(
    rng: random.Random,
    x_size: int,
    right_size: int,
    max_degree: int,
    x_degree: int,
    balanced: bool,
) -> Optional[List[List[int]]]:
    load = [0] * right_size
    rows: List[List[int]] = [[] for _ in range(x_size)]
    order = list(range(x_size))
    rng.shuffle(order)
    for x in order:
        available = [r for r in range(right_size) if load[r] < max_degree]
        if len(available) < x_degree:
            return None
        if balanced:
            keys = {r: (load[r], rng.random()) for r in available}
            picked = sorted(available, key=keys.__getitem__)[:x_degree]
        else:
            picked = rng.sample(available, x_degree)
        for r in picked:
            load[r] += 1
        rows[x] = sorted(picked)
    return rows


def search_rmbg_sized(
    x_size: int,
    y_size: int,
    z_size: int,
    max_degree: int,
    seed: int,
    budget: Optional[int] = None,
    x_degree: Optional[int] = None,
) -> Rmbg:
    """Randomized search for a verified RMBG of the given shape.

    Candidates are degree-capped bipartite graphs whose X-vertices all have
    degree ``x_degree`` (default ``min(max_degree, |Y ∪ Z|)``); even attempts
    fill the least-loaded right vertices first, odd attempts pick uniformly.
    Each candidate is verified exhaustively when feasible, else by sampling.

    Raises:
        InvalidArgumentError: On impossible sizes or degrees
        SearchFailedError: If no candidate verified within ``budget`` attempts
    """
    right = y_size + z_size
    if min(x_size, y_size, z_size) < 0 or x_size < z_size:
        raise InvalidArgumentError(
            message="Need non-negative sizes with x_size >= z_size",
            details={"x_size": x_size, "y_size": y_size, "z_size": z_size},
        )
    if max_degree < 1:
        raise InvalidArgumentError(message=f"max_degree must be positive, got {max_degree}")
    degree = x_degree if x_degree is not None else min(max_degree, right)
    if degree > max_degree or degree > right or degree < 0:
        raise InvalidArgumentError(
            message=f"X-degree {degree} incompatible with max_degree {max_degree} and |Y ∪ Z| = {right}"
        )
    budget = budget or get_settings().budgets.rmbg_search_attempts
    rng = random.Random(seed)

    for attempt in range(budget):
        rows = _random_candidate(rng, x_size, right, max_degree, degree, balanced=attempt % 2 == 0)
        if rows is None:
            continue
        candidate = Rmbg.build(x_size, y_size, z_size, rows)
        verdict = is_robustly_matchable(candidate, default_mode(candidate, seed=seed + attempt))
        if verdict.status != "refuted":
            logger.info(
                "RMBG candidate verified",
                shape=(x_size, y_size, z_size),
                attempt=attempt,
                verdict=verdict.status,
                max_degree=candidate.max_degree(),
                operation="search_rmbg",
            )
            return candidate

    logger.warning(
        "RMBG search failed",
        shape=(x_size, y_size, z_size),
        max_degree=max_degree,
        budget=budget,
        operation="search_rmbg",
    )
    raise SearchFailedError(
        message=f"No verified RMBG({x_size},{y_size},{z_size}) with max degree {max_degree} in {budget} attempts",
        details={"x_size": x_size, "y_size": y_size, "z_size": z_size, "max_degree": max_degree, "budget": budget},
    )


def search_rmbg(m: int, max_degree: int, seed: int, budget: Optional[int] = None) -> Rmbg:
    """Search for a verified RMBG(3m, 2m, 2m) with maximum degree at most ``max_degree``."""
    if m < 1:
        raise InvalidArgumentError(message=f"m must be at least 1, got {m}")
    return search_rmbg_sized(3 * m, 2 * m, 2 * m, max_degree, seed, budget)


def regularize(h: Rmbg, d: int, recheck_draws: Optional[int] = None) -> Rmbg:
    """Extend ``h`` to a (4d, 3d)-regular supergraph via max-flow.

    The network has arcs s→x of capacity 4d − d_H(x), y→t of capacity
    3d − d_H(y), and unit arcs x→y for non-edges; a flow of value
    12dm − e(H) saturates every source and sink arc and its unit arcs are the
    added edges.

    Raises:
        InvalidArgumentError: If h is not of shape (3m, 2m, 2m) or d < 1
        InfeasibleError: On degree overflow or a flow below 12dm − e(H)
        RefutationError: If sampled re-verification refutes the output (so the input was not robust)
    """
    m = h.y_size // 2
    if not (m >= 1 and h.y_size == h.z_size == 2 * m and h.x_size == 3 * m):
        raise InvalidArgumentError(
            message=f"regularize needs shape (3m, 2m, 2m), got ({h.x_size}, {h.y_size}, {h.z_size})"
        )
    if d < 1:
        raise InvalidArgumentError(message=f"d must be positive, got {d}")
    if 4 * d > h.right_size or 3 * d > h.x_size:
        raise InfeasibleError(
            message=f"d={d} needs 4d <= {h.right_size} and 3d <= {h.x_size}",
            details={"d": d, "m": m},
        )

    x_deg = h.x_degrees()
    r_deg = h.right_degrees()
    over_x = [x for x, deg in enumerate(x_deg) if deg > 4 * d]
    over_r = [r for r, deg in enumerate(r_deg) if deg > 3 * d]
    if over_x or over_r:
        raise InfeasibleError(
            message=f"Degrees exceed the (4d, 3d) = ({4 * d}, {3 * d}) targets",
            details={"x_vertices": over_x, "right_vertices": over_r},
        )

    source, first_x = 0, 1
    first_r = first_x + h.x_size
    sink = first_r + h.right_size
    arcs = [Arc(tail=source, head=first_x + x, capacity=4 * d - x_deg[x]) for x in range(h.x_size)]
    arcs += [Arc(tail=first_r + r, head=sink, capacity=3 * d - r_deg[r]) for r in range(h.right_size)]
    pair_of_arc: Dict[int, tuple] = {}
    for x, row in enumerate(h.adjacency):
        present = set(row)
        for r in range(h.right_size):
            if r not in present:
                pair_of_arc[len(arcs)] = (x, r)
                arcs.append(Arc(tail=first_x + x, head=first_r + r, capacity=1))

    flow = max_flow(FlowNetwork(node_count=sink + 1, arcs=arcs, source=source, sink=sink))
    required = 12 * d * m - h.edge_count
    if flow.value < required:
        logger.info(
            "Regularization infeasible",
            flow=flow.value,
            required=required,
            d=d,
            m=m,
            operation="regularize",
        )
        raise InfeasibleError(
            message=f"Max-flow value {flow.value} is below 12dm - e(H) = {required}",
            details={"flow": flow.value, "required": required, "d": d, "m": m},
        )

    extra = [pair for idx, pair in pair_of_arc.items() if flow.arc_flows[idx] == 1]
    out = h.with_edges(extra)
    if (
        any(deg != 4 * d for deg in out.x_degrees())
        or any(deg != 3 * d for deg in out.right_degrees())
        or out.edge_count != 12 * d * m
    ):
        raise InternalInconsistencyError(
            message="Regularized graph misses the exact (4d, 3d) degrees",
            details={"d": d, "edges": out.edge_count},
        )

    draws = get_settings().budgets.regularize_recheck_draws if recheck_draws is None else recheck_draws
    if draws > 0:
        verdict = is_robustly_matchable(out, SampledMode(draws=draws, seed=0))
        if verdict.status == "refuted":
            raise RefutationError(
                message="Regularized graph is not robustly matchable, so neither is the input",
                details={"y_prime": verdict.witness},
            )
    return out


__all__ = [
    "ExhaustiveMode",
    "SampledMode",
    "VerificationMode",
    "RobustnessVerdict",
    "RobustMatching",
    "is_robustly_matchable",
    "default_mode",
    "robust_match",
    "search_rmbg_sized",
    "search_rmbg",
    "regularize",
]
