"""Semi-random nibble and greedy hypergraph matchings, with (γ, F)-perfectness checks."""

from typing import Dict, Iterable, List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.hypermatch.hypergraph import Hypergraph
from rainbow_decomp.utils.errors import InternalInconsistencyError, InvalidArgumentError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)

# Slack when comparing uncovered counts against γ·max(|F|, N^{2/5}).
GAMMA_TOLERANCE = 1e-9


class MatchingReport(BaseModel):
    """A hypergraph matching with its coverage measurements."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: Literal["nibble", "greedy", "given"]
    matching: List[int] = Field(..., description="Sorted edge indices, pairwise vertex-disjoint")
    covered_vertices: int
    coverage: float = Field(..., description="Covered fraction of all vertices")
    family_uncovered: Dict[str, int] = Field(default_factory=dict)
    gamma_effective: float = 0.0
    rounds_used: int = 0


class FamilyLedgerEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: str
    size: int
    uncovered: int
    threshold: float
    ok: bool


class GammaCheck(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    perfect: bool
    gamma: float
    ledger: List[FamilyLedgerEntry]


def _family_scale(h: Hypergraph, size: int) -> float:
    return max(float(size), h.vertex_count ** 0.4)


def _covered_mask(h: Hypergraph, matching: Iterable[int]) -> np.ndarray:
    covered = np.zeros(h.vertex_count, dtype=bool)
    for k in matching:
        e = list(h.edges[k])
        if covered[e].any():
            raise InternalInconsistencyError(
                message=f"Edge {k} overlaps an earlier edge of the matching",
                details={"edge": k},
            )
        covered[e] = True
    return covered


def build_matching_report(
    h: Hypergraph,
    matching: Iterable[int],
    method: Literal["nibble", "greedy", "given"] = "given",
    rounds_used: int = 0,
) -> MatchingReport:
    """Measure coverage; raises InternalInconsistencyError if the edges overlap."""
    chosen = sorted(matching)
    covered = _covered_mask(h, chosen)
    family_uncovered = {
        name: int(len(members) - covered[list(members)].sum()) if members else 0
        for name, members in h.families.items()
    }
    gamma_effective = max(
        (family_uncovered[name] / _family_scale(h, len(members)) for name, members in h.families.items()),
        default=0.0,
    )
    count = int(covered.sum())
    return MatchingReport(
        method=method,
        matching=chosen,
        covered_vertices=count,
        coverage=count / h.vertex_count if h.vertex_count else 1.0,
        family_uncovered=family_uncovered,
        gamma_effective=gamma_effective,
        rounds_used=rounds_used,
    )


def _greedy_extend(h: Hypergraph, order: Iterable[int], covered: np.ndarray, chosen: List[int]) -> None:
    for k in order:
        e = list(h.edges[k])
        if not covered[e].any():
            covered[e] = True
            chosen.append(int(k))


def greedy_matching(h: Hypergraph, seed: int) -> MatchingReport:
    """Maximal matching scanning the edges in a seeded random order."""
    rng = np.random.default_rng(seed)
    covered = np.zeros(h.vertex_count, dtype=bool)
    chosen: List[int] = []
    _greedy_extend(h, rng.permutation(h.edge_count), covered, chosen)
    return build_matching_report(h, chosen, method="greedy")


def nibble_matching(h: Hypergraph, bite: float, rounds: int, seed: int) -> MatchingReport:
    """Semi-random nibble followed by a greedy completion.

    Each round draws one activation variable per edge id, activating every
    surviving edge (no covered vertex) with probability ``bite / D̂`` where D̂
    is the average degree of the surviving hypergraph over its non-isolated
    vertices. Activated edges are scanned in random order and kept when
    disjoint from everything chosen so far. Rounds stop early once no edge
    survives; a final greedy pass then makes the matching maximal.

    Args:
        h: Hypergraph to match
        bite: Expected activated edges per vertex per round, in (0, 1]
        rounds: Maximum number of nibble rounds
        seed: RNG seed; output is deterministic per (h, bite, rounds, seed)

    Returns:
        MatchingReport with method "nibble"
    """
    if not 0 < bite <= 1:
        raise InvalidArgumentError(message=f"bite must lie in (0, 1], got {bite}")
    if rounds < 0:
        raise InvalidArgumentError(message=f"rounds must be non-negative, got {rounds}")

    rng = np.random.default_rng(seed)
    covered = np.zeros(h.vertex_count, dtype=bool)
    chosen: List[int] = []
    alive = list(range(h.edge_count))
    rounds_used = 0

    for rnd in range(rounds):
        alive = [k for k in alive if not covered[list(h.edges[k])].any()]
        if not alive:
            break
        incidences = sum(len(h.edges[k]) for k in alive)
        touched = len({v for k in alive for v in h.edges[k]})
        d_hat = incidences / touched
        p = min(1.0, bite / d_hat)

        draws = rng.random(h.edge_count)
        activated = np.asarray([k for k in alive if draws[k] < p], dtype=np.int64)
        before = len(chosen)
        _greedy_extend(h, rng.permutation(activated), covered, chosen)
        rounds_used = rnd + 1
        logger.debug(
            "Nibble round",
            round=rnd,
            alive=len(alive),
            d_hat=round(d_hat, 3),
            activated=len(activated),
            kept=len(chosen) - before,
            operation="nibble_matching",
        )

    _greedy_extend(h, rng.permutation(h.edge_count), covered, chosen)
    report = build_matching_report(h, chosen, method="nibble", rounds_used=rounds_used)
    logger.info(
        "Nibble matching finished",
        edges=len(report.matching),
        coverage=round(report.coverage, 4),
        gamma_effective=round(report.gamma_effective, 6),
        rounds=rounds_used,
        operation="nibble_matching",
    )
    return report


def check_gamma_perfect(h: Hypergraph, matching: Iterable[int], gamma: float) -> GammaCheck:
    """True iff every family F has at most γ·max(|F|, N^{2/5}) uncovered vertices."""
    if gamma < 0:
        raise InvalidArgumentError(message=f"gamma must be non-negative, got {gamma}")
    report = build_matching_report(h, matching)
    ledger = []
    for name, members in h.families.items():
        threshold = gamma * _family_scale(h, len(members))
        uncovered = report.family_uncovered[name]
        ledger.append(
            FamilyLedgerEntry(
                family=name,
                size=len(members),
                uncovered=uncovered,
                threshold=threshold,
                ok=uncovered <= threshold + GAMMA_TOLERANCE,
            )
        )
    return GammaCheck(perfect=all(entry.ok for entry in ledger), gamma=gamma, ledger=ledger)


def report_for(h: Hypergraph, method: str, bite: float, rounds: int, seed: int) -> MatchingReport:
    """Dispatch to nibble or greedy by name."""
    if method == "greedy":
        return greedy_matching(h, seed)
    if method == "nibble":
        return nibble_matching(h, bite, rounds, seed)
    raise InvalidArgumentError(message=f"Unknown matching method '{method}'")


__all__ = [
    "GAMMA_TOLERANCE",
    "MatchingReport",
    "FamilyLedgerEntry",
    "GammaCheck",
    "build_matching_report",
    "greedy_matching",
    "nibble_matching",
    "check_gamma_perfect",
    "report_for",
]
