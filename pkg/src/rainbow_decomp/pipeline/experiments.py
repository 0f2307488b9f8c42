"""Seed-grid experiments over the library components.

Each run ``index`` of a grid uses seed ``seed + index``, so a grid is
reproducible row by row no matter how many worker processes execute it.

Per kind, the ``value`` and ``baseline`` columns hold:

- ``decompose``: search nodes of exact_decompose on a random 1-factorization of K_n; no baseline
- ``nibble``: nibble coverage on a 3-uniform near-30-regular hypergraph with n vertices;
  greedy coverage as baseline. A run succeeds when the nibble's γ_effective is at most the greedy one.
- ``rmbg``: edge count of the RMBG(3n, 2n, 2n) found with maximum degree 4n; no baseline
- ``rainbow-pm``: restarts of the local search on a random coloured bipartite graph with
  n vertices per side; the colour cap as baseline
"""

import csv
import io
import multiprocessing
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.core.factorization import generate_random_factorization
from rainbow_decomp.hypermatch.hypergraph import random_uniform_hypergraph
from rainbow_decomp.hypermatch.matching import greedy_matching, nibble_matching
from rainbow_decomp.matchings.bipartite import random_coloured_bipartite
from rainbow_decomp.matchings.rainbow import rainbow_perfect_matching
from rainbow_decomp.pipeline.exact import exact_decompose
from rainbow_decomp.rmbg.robust import search_rmbg
from rainbow_decomp.utils.errors import InvalidArgumentError, wrap_unexpected
from rainbow_decomp.utils.logging import bind_seed, get_logger

logger = get_logger(__name__)

ExperimentKind = Literal["decompose", "nibble", "rmbg", "rainbow-pm"]
EXPERIMENT_KINDS: Tuple[str, ...] = ("decompose", "nibble", "rmbg", "rainbow-pm")

CSV_FIELDS = ["kind", "n", "index", "seed", "status", "success", "value", "baseline"]

NIBBLE_DEGREE = 30
NIBBLE_MAX_CODEGREE = 3
NIBBLE_BITE = 0.1
NIBBLE_ROUNDS = 60
RAINBOW_PM_DENSITY = 0.5


class ExperimentRow(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ExperimentKind
    n: int
    index: int
    seed: int
    status: str = Field(..., description="'ok' or the error type of a failed run")
    success: bool
    value: Optional[float] = None
    baseline: Optional[float] = None


class ExperimentSummary(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ExperimentKind
    n: int
    runs: int
    successes: int
    success_rate: float
    mean_value: Optional[float] = None
    mean_baseline: Optional[float] = None
    statuses: Dict[str, int] = Field(default_factory=dict)


class ExperimentTable(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    rows: List[ExperimentRow]
    summary: ExperimentSummary


def _decompose(n: int, seed: int) -> Tuple[bool, Optional[float], Optional[float]]:
    g = generate_random_factorization(n, seed)
    result = exact_decompose(g, seed=seed)
    return result.status == "found", float(result.nodes), None


def _nibble(n: int, seed: int) -> Tuple[bool, Optional[float], Optional[float]]:
    h = random_uniform_hypergraph(n, 3, NIBBLE_DEGREE, NIBBLE_MAX_CODEGREE, seed)
    nibble = nibble_matching(h, NIBBLE_BITE, NIBBLE_ROUNDS, seed)
    greedy = greedy_matching(h, seed)
    return nibble.gamma_effective <= greedy.gamma_effective, nibble.coverage, greedy.coverage


def _rmbg(n: int, seed: int) -> Tuple[bool, Optional[float], Optional[float]]:
    h = search_rmbg(n, 4 * n, seed)
    return True, float(h.edge_count), None


def _rainbow_pm(n: int, seed: int) -> Tuple[bool, Optional[float], Optional[float]]:
    g = random_coloured_bipartite(n, RAINBOW_PM_DENSITY, n * n, seed)
    cap = max(g.colour_counts().values(), default=1)
    result = rainbow_perfect_matching(g, cap, seed=seed)
    return True, float(result.restarts), float(cap)


_RUNNERS: Dict[str, Callable[[int, int], Tuple[bool, Optional[float], Optional[float]]]] = {
    "decompose": _decompose,
    "nibble": _nibble,
    "rmbg": _rmbg,
    "rainbow-pm": _rainbow_pm,
}


def run_single(kind: str, n: int, index: int, seed: int) -> ExperimentRow:
    """Run one grid cell. Failures become rows with the error type as status."""
    bind_seed(seed)
    try:
        success, value, baseline = _RUNNERS[kind](n, seed)
        status = "ok"
    except Exception as exc:
        err = wrap_unexpected(exc)
        logger.info(
            "Experiment run failed",
            kind=kind,
            n=n,
            index=index,
            error_type=err.error_type,
            operation="run_single",
        )
        success, value, baseline, status = False, None, None, err.error_type
    return ExperimentRow(
        kind=kind,  # type: ignore[arg-type]
        n=n,
        index=index,
        seed=seed,
        status=status,
        success=success,
        value=value,
        baseline=baseline,
    )


def summarize(kind: str, n: int, rows: List[ExperimentRow]) -> ExperimentSummary:
    values = np.array([r.value for r in rows if r.value is not None], dtype=float)
    baselines = np.array([r.baseline for r in rows if r.baseline is not None], dtype=float)
    statuses: Dict[str, int] = {}
    for r in rows:
        statuses[r.status] = statuses.get(r.status, 0) + 1
    successes = sum(1 for r in rows if r.success)
    return ExperimentSummary(
        kind=kind,  # type: ignore[arg-type]
        n=n,
        runs=len(rows),
        successes=successes,
        success_rate=successes / len(rows) if rows else 0.0,
        mean_value=float(values.mean()) if values.size else None,
        mean_baseline=float(baselines.mean()) if baselines.size else None,
        statuses=dict(sorted(statuses.items())),
    )


def run_experiment(kind: str, n: int, seeds: int, seed: int = 0, workers: int = 1) -> ExperimentTable:
    """Run ``seeds`` independent runs of ``kind`` at size ``n``.

    Args:
        kind: One of EXPERIMENT_KINDS
        n: Instance size (see the module docstring for its meaning per kind)
        seeds: Number of runs in the grid
        seed: Base seed; run i uses seed + i
        workers: Worker processes; 1 runs in-process

    Raises:
        InvalidArgumentError: On an unknown kind or non-positive counts
    """
    if kind not in _RUNNERS:
        raise InvalidArgumentError(
            message=f"Unknown experiment kind '{kind}'",
            details={"kind": kind, "allowed": list(EXPERIMENT_KINDS)},
        )
    if seeds < 1 or workers < 1 or n < 1:
        raise InvalidArgumentError(
            message="n, seeds and workers must be positive",
            details={"n": n, "seeds": seeds, "workers": workers},
        )
    if seed < 0:
        raise InvalidArgumentError(message=f"seed must be non-negative, got {seed}")

    arguments = [(kind, n, i, seed + i) for i in range(seeds)]
    if workers == 1:
        rows = [run_single(*arg) for arg in arguments]
    else:
        with multiprocessing.Pool(min(workers, seeds)) as pool:
            rows = pool.starmap(run_single, arguments)

    summary = summarize(kind, n, rows)
    logger.info(
        "Experiment finished",
        kind=kind,
        n=n,
        runs=summary.runs,
        successes=summary.successes,
        workers=workers,
        operation="run_experiment",
    )
    return ExperimentTable(rows=rows, summary=summary)


def _csv_cell(value: object) -> object:
    if value is None:
        return ""
    if isinstance(value, bool):
        return int(value)
    return value


def experiment_csv(rows: List[ExperimentRow]) -> str:
    """Render rows as CSV text with a header line."""
    buffer = io.StringIO(newline="")
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in row.model_dump().items()})
    return buffer.getvalue()


def write_experiment_csv(rows: List[ExperimentRow], path: Union[str, Path]) -> None:
    Path(path).write_text(experiment_csv(rows), encoding="utf-8")


__all__ = [
    "CSV_FIELDS",
    "EXPERIMENT_KINDS",
    "ExperimentRow",
    "ExperimentSummary",
    "ExperimentTable",
    "experiment_csv",
    "run_experiment",
    "run_single",
    "summarize",
    "write_experiment_csv",
]
