"""Hypergraphs with named vertex families, degree statistics and a random generator."""

from collections import Counter
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.utils.errors import InvalidArgumentError, InvalidInstanceError, from_pydantic_error
from rainbow_decomp.utils.logging import get_logger
from rainbow_decomp.utils.serialization import expect_mapping, read_json, write_json

logger = get_logger(__name__)


class Hypergraph(BaseModel):
    """Hypergraph on ``range(vertex_count)`` with a collection of named vertex families."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    vertex_count: int = Field(..., ge=0)
    edges: Tuple[Tuple[int, ...], ...] = Field(default=())
    families: Dict[str, Tuple[int, ...]] = Field(default_factory=dict)

    @field_validator("edges", mode="before")
    @classmethod
    def normalize_edges(cls, v: Any) -> Any:
        if isinstance(v, (list, tuple)):
            return tuple(tuple(sorted(e)) for e in v)
        return v

    @model_validator(mode="after")
    def validate_ranges(self) -> "Hypergraph":
        n = self.vertex_count
        for k, e in enumerate(self.edges):
            if len(e) < 2 or len(set(e)) != len(e):
                raise ValueError(f"edge {k} needs at least 2 distinct vertices")
            if e[0] < 0 or e[-1] >= n:
                raise ValueError(f"edge {k} has a vertex outside [0, {n - 1}]")
        for name, members in self.families.items():
            if any(not 0 <= v < n for v in members):
                raise ValueError(f"family '{name}' has a vertex outside [0, {n - 1}]")
        return self

    @classmethod
    def build(
        cls,
        vertex_count: int,
        edges: List[Tuple[int, ...]],
        families: Union[Dict[str, List[int]], None] = None,
    ) -> "Hypergraph":
        try:
            return cls(
                vertex_count=vertex_count,
                edges=edges,
                families={k: tuple(sorted(set(v))) for k, v in (families or {}).items()},
            )
        except PydanticValidationError as e:
            raise from_pydantic_error(e, "Invalid hypergraph", parameters={"vertex_count": vertex_count})

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        flat = [v for e in self.edges for v in e]
        return np.bincount(np.asarray(flat, dtype=np.int64), minlength=self.vertex_count)

    def uniformity(self) -> Union[int, None]:
        """Common edge size, or None for mixed sizes or no edges."""
        sizes = {len(e) for e in self.edges}
        return sizes.pop() if len(sizes) == 1 else None


class DegreeStats(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    min_degree: int
    max_degree: int
    max_codegree: int
    average_degree: float


def degree_stats(h: Hypergraph) -> DegreeStats:
    """Exact minimum/maximum degree and maximum codegree by direct counting."""
    degrees = h.degrees()
    pairs: Counter = Counter()
    for e in h.edges:
        pairs.update(combinations(e, 2))
    return DegreeStats(
        min_degree=int(degrees.min()) if h.vertex_count else 0,
        max_degree=int(degrees.max()) if h.vertex_count else 0,
        max_codegree=max(pairs.values(), default=0),
        average_degree=float(degrees.mean()) if h.vertex_count else 0.0,
    )


def random_uniform_hypergraph(
    vertex_count: int,
    uniformity: int,
    degree: int,
    max_codegree: int,
    seed: int,
) -> Hypergraph:
    """Near-regular uniform hypergraph from a configuration model.

    Each vertex contributes ``degree`` stubs; a random permutation of the
    stubs is cut into groups of ``uniformity``. Groups with a repeated vertex
    or that would push some pair above ``max_codegree`` are dropped, so
    degrees end up at most ``degree``.
    """
    if vertex_count < uniformity or uniformity < 2:
        raise InvalidArgumentError(
            message=f"Need 2 <= uniformity <= vertex_count, got {uniformity} and {vertex_count}"
        )
    if degree < 1 or max_codegree < 1:
        raise InvalidArgumentError(message="degree and max_codegree must be positive")

    rng = np.random.default_rng(seed)
    stubs = rng.permutation(np.repeat(np.arange(vertex_count), degree))
    usable = len(stubs) - len(stubs) % uniformity
    groups = stubs[:usable].reshape(-1, uniformity)

    pairs: Counter = Counter()
    edges: List[Tuple[int, ...]] = []
    dropped = 0
    for group in groups:
        e = tuple(sorted(int(v) for v in group))
        if len(set(e)) != uniformity:
            dropped += 1
            continue
        e_pairs = list(combinations(e, 2))
        if any(pairs[p] >= max_codegree for p in e_pairs):
            dropped += 1
            continue
        pairs.update(e_pairs)
        edges.append(e)

    logger.debug(
        "Random uniform hypergraph generated",
        vertex_count=vertex_count,
        edges=len(edges),
        dropped=dropped,
        operation="random_uniform_hypergraph",
    )
    return Hypergraph(vertex_count=vertex_count, edges=edges)


def hypergraph_to_json(h: Hypergraph) -> Dict[str, Any]:
    return {
        "vertex_count": h.vertex_count,
        "edges": [list(e) for e in h.edges],
        "families": {name: list(members) for name, members in h.families.items()},
    }


def hypergraph_from_json(data: Any, source: str = "<memory>") -> Hypergraph:
    data = expect_mapping(data, source)
    try:
        return Hypergraph.build(
            data.get("vertex_count"),  # type: ignore[arg-type]
            data.get("edges", []),
            data.get("families", {}),
        )
    except (InvalidArgumentError, TypeError) as e:
        message = e.message if isinstance(e, InvalidArgumentError) else str(e)
        raise InvalidInstanceError(message=f"{source}: {message}")


def load_hypergraph(path: Union[str, Path]) -> Hypergraph:
    return hypergraph_from_json(read_json(path), source=str(path))


def dump_hypergraph(h: Hypergraph, path: Union[str, Path]) -> None:
    write_json(path, hypergraph_to_json(h))


__all__ = [
    "Hypergraph",
    "DegreeStats",
    "degree_stats",
    "random_uniform_hypergraph",
    "hypergraph_to_json",
    "hypergraph_from_json",
    "load_hypergraph",
    "dump_hypergraph",
]
