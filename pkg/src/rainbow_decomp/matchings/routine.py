"""Randomized greedy construction of edge-disjoint rainbow perfect matchings."""

import random
from collections import Counter
from itertools import combinations
from math import ceil
from typing import Dict, List, Literal, Optional, Sequence, Set

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.matchings.bipartite import ColouredBipartite
from rainbow_decomp.matchings.rainbow import rainbow_perfect_matching
from rainbow_decomp.models import Edge, edge_key
from rainbow_decomp.utils.errors import InvalidArgumentError, NotFoundError, PartialResultError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)


class RoutineStep(BaseModel):
    """Outcome for one task: a chosen rainbow perfect matching or an explicit skip."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    index: int
    status: Literal["matched", "skipped"]
    pairs: Dict[int, int] = Field(default_factory=dict)
    candidates: int = 0
    residual_max_degree: int = 0


class RoutineResult(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    steps: List[RoutineStep]
    r: int = Field(..., description="Candidates generated per step (after the budget cap)")
    precondition_violations: List[str] = Field(default_factory=list)

    def matchings(self) -> List[Dict[int, int]]:
        return [step.pairs for step in self.steps if step.status == "matched"]


def routine_preconditions(tasks: Sequence[ColouredBipartite], mu: float, universe_size: int) -> List[str]:
    """Size, overlap, membership and colour-multiplicity conditions; returns the violations."""
    n = universe_size
    t = len(tasks)
    supports = [set(task.left) | set(task.right) for task in tasks]
    violations = []
    for i, u in enumerate(supports):
        if len(u) < mu * n:
            violations.append(f"task {i}: |U| = {len(u)} < mu*n = {mu * n:.3f}")
    for i, j in combinations(range(t), 2):
        overlap = len(supports[i] & supports[j])
        if overlap > 5 * mu * mu * n:
            violations.append(f"tasks {i},{j}: overlap {overlap} > 5mu^2 n = {5 * mu * mu * n:.3f}")
    membership: Counter = Counter(v for u in supports for v in u)
    for v, k in sorted(membership.items()):
        if k > 3 * mu * t:
            violations.append(f"vertex {v}: in {k} tasks > 3mu t = {3 * mu * t:.3f}")
    for i, task in enumerate(tasks):
        for c, k in sorted(task.colour_counts().items()):
            if k > 2 * mu * mu * n:
                violations.append(f"task {i}: colour {c} has {k} edges > 2mu^2 n = {2 * mu * mu * n:.3f}")
    return violations


def _residual_max_degree(used: Set[Edge], support: Set[int]) -> int:
    degree: Counter = Counter()
    for a, b in used:
        if a in support and b in support:
            degree[a] += 1
            degree[b] += 1
    return max(degree.values(), default=0)


def greedy_disjoint_rainbow_pms(
    tasks: Sequence[ColouredBipartite],
    mu: float,
    seed: int,
    universe_size: int,
    budget_r: Optional[int] = None,
    switch_budget: Optional[int] = None,
) -> RoutineResult:
    """Edge-disjoint rainbow perfect matchings M_1..M_t, one per task, or explicit skips.

    For each task in order, edges used by earlier matchings are deleted. When
    the used edges inside the task's support have maximum degree above
    μ^{3/2}·n the task is skipped; otherwise up to r = ⌈105·μ^{3/2}·n⌉ (capped by
    ``budget_r``) pairwise edge-disjoint rainbow perfect matchings of the
    residual graph are generated and one is picked uniformly.

    Precondition violations are reported in the result, not raised.

    Raises:
        InvalidArgumentError: If mu is outside (0, 1) or universe_size < 1
        PartialResultError: If some task admits no candidate; details carry
            the completed prefix
    """
    if not 0 < mu < 1:
        raise InvalidArgumentError(message=f"mu must lie in (0, 1), got {mu}")
    if universe_size < 1:
        raise InvalidArgumentError(message=f"universe_size must be positive, got {universe_size}")

    n = universe_size
    r = ceil(105 * mu ** 1.5 * n)
    if budget_r is not None:
        r = max(1, min(r, budget_r))
    skip_threshold = mu ** 1.5 * n
    violations = routine_preconditions(tasks, mu, n)
    if violations:
        logger.warning(
            "Routine preconditions violated",
            count=len(violations),
            first=violations[0],
            operation="greedy_disjoint_rainbow_pms",
        )

    rng = random.Random(seed)
    used: Set[Edge] = set()
    steps: List[RoutineStep] = []
    for s, task in enumerate(tasks):
        support = set(task.left) | set(task.right)
        residual_degree = _residual_max_degree(used, support)
        if residual_degree > skip_threshold:
            steps.append(RoutineStep(index=s, status="skipped", residual_max_degree=residual_degree))
            continue

        residual = task.without(used)
        candidates: List[Dict[int, int]] = []
        blocked: Set[Edge] = set()
        for j in range(r):
            graph = residual.without(blocked)
            cap = max(graph.colour_counts().values(), default=0)
            try:
                found = rainbow_perfect_matching(graph, cap, budget=switch_budget, seed=rng.randrange(2**31))
            except NotFoundError:
                break
            candidates.append(found.pairs)
            blocked |= {edge_key(a, b) for a, b in found.pairs.items()}

        if not candidates:
            raise PartialResultError(
                message=f"No rainbow perfect matching for task {s}",
                details={
                    "index": s,
                    "completed": [step.model_dump() for step in steps],
                },
            )
        chosen = rng.choice(candidates)
        used |= {edge_key(a, b) for a, b in chosen.items()}
        steps.append(
            RoutineStep(
                index=s,
                status="matched",
                pairs=chosen,
                candidates=len(candidates),
                residual_max_degree=residual_degree,
            )
        )

    logger.info(
        "Disjoint rainbow matchings built",
        tasks=len(tasks),
        skipped=sum(1 for step in steps if step.status == "skipped"),
        r=r,
        operation="greedy_disjoint_rainbow_pms",
    )
    return RoutineResult(steps=steps, r=r, precondition_violations=violations)


__all__ = [
    "RoutineStep",
    "RoutineResult",
    "routine_preconditions",
    "greedy_disjoint_rainbow_pms",
]
