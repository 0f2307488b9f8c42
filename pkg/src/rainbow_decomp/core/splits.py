"""Independent random splits of a ground set."""

from typing import Hashable, Iterable, List, Sequence, TypeVar

import numpy as np

from rainbow_decomp.utils.errors import InvalidArgumentError

T = TypeVar("T", bound=Hashable)

WEIGHT_TOLERANCE = 1e-9


def random_split(universe: Iterable[T], weights: Sequence[float], seed: int) -> List[List[T]]:
    """Assign each element independently to cell i with probability ``weights[i]``.

    The universe is processed in sorted order so the outcome depends only on
    its contents. When the weights sum to less than one, a trailing remainder
    cell collects the elements that fell outside every cell; the result then
    has ``len(weights) + 1`` cells.

    Args:
        universe: Elements to split (must be mutually comparable)
        weights: Non-negative cell probabilities with sum at most 1
        seed: RNG seed

    Returns:
        Cells as sorted lists

    Raises:
        InvalidArgumentError: On negative weights, an empty weight vector or a sum above 1
    """
    w = np.asarray(list(weights), dtype=float)
    if w.size == 0:
        raise InvalidArgumentError(message="random_split needs at least one weight")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise InvalidArgumentError(
            message="Split weights must be finite and non-negative",
            details={"weights": [float(x) for x in w]},
        )
    total = float(w.sum())
    if total > 1 + WEIGHT_TOLERANCE:
        raise InvalidArgumentError(
            message=f"Split weights sum to {total}, above 1",
            details={"weights": [float(x) for x in w]},
        )

    items = sorted(universe)
    with_remainder = total < 1 - WEIGHT_TOLERANCE
    cells: List[List[T]] = [[] for _ in range(w.size + (1 if with_remainder else 0))]
    if not items:
        return cells

    rng = np.random.default_rng(seed)
    draws = rng.random(len(items))
    bounds = np.cumsum(w)
    if not with_remainder:
        # Absorb rounding so that every draw lands in a real cell.
        bounds[-1] = np.inf
    index = np.searchsorted(bounds, draws, side="right")
    for item, cell in zip(items, index.tolist()):
        cells[cell].append(item)
    return cells


__all__ = ["random_split", "WEIGHT_TOLERANCE"]
