"""Greedy rainbow rooted embeddings of small patterns into a coloured host graph.

Patterns are embedded one index at a time. Before index s, the vertices whose
accumulated degree already exceeds ⌈√γ·n⌉ (other than the roots of pattern s)
are avoided; the remaining pattern vertices are placed in BFS order from the
roots, each uniformly among the vertices adjacent to all of its placed
neighbours through unused host edges whose colours lie in C_s and are new for
this index.
"""

import random
from collections import deque
from math import ceil, sqrt
from typing import AbstractSet, Dict, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from rainbow_decomp.models import Edge, EdgeColouredKn, EdgeSet, edge_key
from rainbow_decomp.settings import get_settings
from rainbow_decomp.utils.errors import (
    EmbedStuckError,
    InternalInconsistencyError,
    InvalidArgumentError,
    RetryExhaustedError,
)
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)


class EmbeddingPattern(BaseModel):
    """Pattern graph H_i on ``range(vertex_count)`` with rooted placement Λ_i."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    vertex_count: int = Field(..., ge=1)
    edges: Tuple[Edge, ...] = Field(default=())
    roots: Dict[int, int] = Field(default_factory=dict, description="Pattern root -> host vertex")
    target_vertices: Tuple[int, ...] = Field(default=(), description="V_i, where non-roots may land")
    colours: Tuple[int, ...] = Field(default=(), description="C_i, the allowed colours")

    @field_validator("edges", mode="before")
    @classmethod
    def normalize_edges(cls, v: object) -> object:
        if isinstance(v, (list, tuple)):
            return tuple(edge_key(a, b) for a, b in v)
        return v

    @model_validator(mode="after")
    def validate_roots(self) -> "EmbeddingPattern":
        for a, b in self.edges:
            if b >= self.vertex_count or a < 0:
                raise ValueError(f"pattern edge ({a},{b}) outside [0, {self.vertex_count - 1}]")
            if a in self.roots and b in self.roots:
                raise ValueError(f"roots {a} and {b} are adjacent")
        if any(not 0 <= x < self.vertex_count for x in self.roots):
            raise ValueError("root outside the pattern")
        if len(set(self.roots.values())) != len(self.roots):
            raise ValueError("root placement is not injective")
        return self

    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def max_degree(self) -> int:
        return max((len(ns) for ns in self.adjacency()), default=0)

    def bfs_order(self) -> List[int]:
        """Roots first, then BFS from them; unreached components BFS from their least vertex."""
        adj = self.adjacency()
        seen = set(self.roots)
        order = sorted(self.roots)
        queue = deque(order)
        pending = iter(range(self.vertex_count))
        while len(order) < self.vertex_count:
            if not queue:
                start = next(v for v in pending if v not in seen)
                seen.add(start)
                order.append(start)
                queue.append(start)
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
        return order


class EmbeddingTask(BaseModel):
    """Patterns H_1..H_t to embed edge-disjointly into ``host`` (all of K_n when None)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    g: EdgeColouredKn
    host: Optional[EdgeSet] = None
    patterns: List[EmbeddingPattern]
    max_degree: int = Field(..., ge=0)
    gamma: float = Field(..., ge=0, le=1)
    size_bound: int = Field(..., ge=1)

    @model_validator(mode="after")
    def validate_patterns(self) -> "EmbeddingTask":
        n = self.g.n
        if self.host is not None and self.host.n != n:
            raise ValueError(f"host has {self.host.n} vertices, instance has {n}")
        for i, p in enumerate(self.patterns):
            if p.max_degree() > self.max_degree:
                raise ValueError(f"pattern {i} has degree {p.max_degree()} > {self.max_degree}")
            if p.vertex_count > self.size_bound or len(p.edges) > self.size_bound:
                raise ValueError(f"pattern {i} exceeds the size bound {self.size_bound}")
            if any(not 0 <= v < n for v in list(p.roots.values()) + list(p.target_vertices)):
                raise ValueError(f"pattern {i} places vertices outside [0, {n - 1}]")
        return self


class EmbeddingResult(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    placements: List[Dict[int, int]] = Field(..., description="ψ_i: pattern vertex -> host vertex")
    edges: List[List[Edge]] = Field(..., description="Host edges used by each ψ_i(H_i)")
    degree_ledger: Dict[int, int] = Field(..., description="Accumulated degree of every touched host vertex")
    max_accumulated_degree: int
    avoid_threshold: int
    ledger_violations: List[int] = Field(
        default_factory=list, description="Vertices above 2√γ·n + r(u)·Δ"
    )


def candidate_set(
    g: EdgeColouredKn,
    host_adjacency: Optional[Sequence[AbstractSet[int]]],
    placed_neighbours: Sequence[int],
    target_vertices: AbstractSet[int],
    colours: AbstractSet[int],
    used_vertices: AbstractSet[int],
    used_colours: AbstractSet[int],
    avoided: AbstractSet[int],
    consumed: AbstractSet[Edge] = frozenset(),
) -> List[int]:
    """Vertices v of V_i joined to every placed neighbour by a usable edge.

    An edge uv is usable when it is a host edge, not yet consumed, and its
    colour lies in C_i and is unused for this index; the colours at v must
    also be pairwise distinct. ``avoided`` (B) and ``used_vertices`` are removed.
    """
    result = []
    for v in sorted(target_vertices):
        if v in avoided or v in used_vertices:
            continue
        seen: Set[int] = set()
        for u in placed_neighbours:
            if u == v or (host_adjacency is not None and v not in host_adjacency[u]):
                break
            c = g.colour_of(u, v)
            if c not in colours or c in used_colours or c in seen or edge_key(u, v) in consumed:
                break
            seen.add(c)
        else:
            result.append(v)
    return result


def _exclusion_breakdown(
    g: EdgeColouredKn,
    host_adjacency: Optional[Sequence[AbstractSet[int]]],
    placed_neighbours: Sequence[int],
    target_vertices: AbstractSet[int],
    colours: AbstractSet[int],
    used_vertices: AbstractSet[int],
    used_colours: AbstractSet[int],
    avoided: AbstractSet[int],
    consumed: AbstractSet[Edge],
) -> Dict[str, int]:
    counts = {"avoided": 0, "used_vertex": 0, "not_adjacent": 0, "colour_not_allowed": 0, "colour_used": 0, "edge_consumed": 0}
    for v in target_vertices:
        if v in avoided:
            counts["avoided"] += 1
        elif v in used_vertices:
            counts["used_vertex"] += 1
        else:
            for u in placed_neighbours:
                if u == v or (host_adjacency is not None and v not in host_adjacency[u]):
                    counts["not_adjacent"] += 1
                    break
                c = g.colour_of(u, v)
                if c not in colours:
                    counts["colour_not_allowed"] += 1
                    break
                if c in used_colours:
                    counts["colour_used"] += 1
                    break
                if edge_key(u, v) in consumed:
                    counts["edge_consumed"] += 1
                    break
    return counts


def greedy_embed(task: EmbeddingTask, seed: int) -> EmbeddingResult:
    """Embed every pattern in turn, edge-disjointly and rainbow within each index.

    Raises:
        EmbedStuckError: When some pattern vertex has no candidate; details give
            the index, the pattern vertex, |S| and the exclusion breakdown
        InternalInconsistencyError: If the degree ledger disagrees with a recount
    """
    g = task.g
    n = g.n
    rng = random.Random(seed)
    host_adjacency = task.host.adjacency() if task.host is not None else None
    threshold = ceil(sqrt(task.gamma) * n)
    degree = [0] * n
    root_count = [0] * n
    consumed: Set[Edge] = set()
    placements: List[Dict[int, int]] = []
    all_edges: List[List[Edge]] = []

    for s, pattern in enumerate(task.patterns):
        root_images = set(pattern.roots.values())
        for v in root_images:
            root_count[v] += 1
        avoided = {u for u in range(n) if degree[u] > threshold} - root_images
        targets = set(pattern.target_vertices)
        colours = set(pattern.colours)
        adj = pattern.adjacency()
        placement = dict(pattern.roots)
        used_vertices = set(root_images)
        used_colours: Set[int] = set()
        edges: List[Edge] = []

        for u in pattern.bfs_order():
            if u in placement:
                continue
            placed = [placement[w] for w in adj[u] if w in placement]
            cands = candidate_set(
                g, host_adjacency, placed, targets, colours, used_vertices, used_colours, avoided, consumed
            )
            if not cands:
                breakdown = _exclusion_breakdown(
                    g, host_adjacency, placed, targets, colours, used_vertices, used_colours, avoided, consumed
                )
                logger.info(
                    "Greedy embedding stuck",
                    index=s,
                    pattern_vertex=u,
                    placed_neighbours=len(placed),
                    operation="greedy_embed",
                    **breakdown,
                )
                raise EmbedStuckError(
                    message=f"No candidate for vertex {u} of pattern {s} ({len(placed)} placed neighbours)",
                    details={"index": s, "pattern_vertex": u, "placed_neighbours": len(placed), "exclusions": breakdown},
                )
            v = rng.choice(cands)
            placement[u] = v
            used_vertices.add(v)
            for w in placed:
                e = edge_key(w, v)
                consumed.add(e)
                used_colours.add(g.colour_of(w, v))
                degree[w] += 1
                degree[v] += 1
                edges.append(e)
        placements.append(placement)
        all_edges.append(sorted(edges))

    recount = [0] * n
    for edges in all_edges:
        for a, b in edges:
            recount[a] += 1
            recount[b] += 1
    if recount != degree:
        raise InternalInconsistencyError(message="Degree ledger disagrees with the embedded edges")

    bound = 2 * sqrt(task.gamma) * n
    violations = [u for u in range(n) if degree[u] > bound + root_count[u] * task.max_degree]
    if violations:
        logger.info(
            "Degree ledger bound exceeded",
            vertices=len(violations),
            bound=round(bound, 3),
            operation="greedy_embed",
        )
    return EmbeddingResult(
        placements=placements,
        edges=all_edges,
        degree_ledger={u: d for u, d in enumerate(degree) if d},
        max_accumulated_degree=max(degree, default=0),
        avoid_threshold=threshold,
        ledger_violations=violations,
    )


def embed_with_retries(task: EmbeddingTask, seed: int, retries: Optional[int] = None) -> EmbeddingResult:
    """Run :func:`greedy_embed` with seeds ``seed, seed+1, ...`` until one succeeds."""
    retries = retries or get_settings().budgets.embedding_retries
    last: Optional[EmbedStuckError] = None
    for attempt in range(retries):
        try:
            return greedy_embed(task, seed + attempt)
        except EmbedStuckError as e:
            last = e
    raise RetryExhaustedError(
        message=f"Greedy embedding stuck in all {retries} attempts",
        details={"retries": retries, "last": last.details if last else None},
    )


def build_task(
    g: EdgeColouredKn,
    patterns: Sequence[EmbeddingPattern],
    gamma: float,
    host: Optional[EdgeSet] = None,
) -> EmbeddingTask:
    """EmbeddingTask with Δ and the size bound read off the patterns."""
    if not patterns:
        raise InvalidArgumentError(message="At least one pattern is required")
    return EmbeddingTask(
        g=g,
        host=host,
        patterns=list(patterns),
        max_degree=max(p.max_degree() for p in patterns),
        gamma=gamma,
        size_bound=max(max(p.vertex_count, len(p.edges)) for p in patterns),
    )


__all__ = [
    "EmbeddingPattern",
    "EmbeddingTask",
    "EmbeddingResult",
    "candidate_set",
    "greedy_embed",
    "embed_with_retries",
    "build_task",
]
