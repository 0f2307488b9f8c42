"""Core data models for rainbow-decomp.

Vertices and colours are dense integer ids. Edges are stored as ``(min, max)``
pairs; the flat edge index of ``{u, v}`` with ``u < v`` in ``K_n`` is the
row-major position in the upper triangle (see :func:`edge_index`), shared by
the instance format and the cycle-hypergraph vertex layout.
"""

from math import isqrt
from typing import Dict, FrozenSet, Iterable, Iterator, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

Edge = Tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Normalize an unordered vertex pair."""
    if u == v:
        raise ValueError(f"Loop at vertex {u} is not an edge")
    return (u, v) if u < v else (v, u)


def edge_count(n: int) -> int:
    """Number of edges of K_n."""
    return n * (n - 1) // 2


def edge_index(n: int, u: int, v: int) -> int:
    """Row-major upper-triangular index of the edge ``{u, v}`` in K_n."""
    if u > v:
        u, v = v, u
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def edge_from_index(n: int, k: int) -> Edge:
    """Inverse of :func:`edge_index`."""
    # Rows shrink by one; solve for the row with a closed form then correct.
    u = int(n - 0.5 - ((n - 0.5) ** 2 - 2 * k) ** 0.5) if k >= 0 else 0
    u = max(0, min(u, n - 2))
    while u > 0 and edge_index(n, u, u + 1) > k:
        u -= 1
    while u < n - 2 and edge_index(n, u + 1, u + 2) <= k:
        u += 1
    return (u, u + 1 + k - edge_index(n, u, u + 1))


def vertices_for_edge_total(total: int) -> int:
    """Return n with C(n, 2) == total, or -1 when no such n exists."""
    n = (1 + isqrt(1 + 8 * total)) // 2
    return n if edge_count(n) == total else -1


class EdgeColouredKn(BaseModel):
    """Complete graph K_n with an edge colouring by ids in ``[0, n-2]``.

    The structural checks here (even order, array length, colour range) run at
    construction; whether the colour classes are perfect matchings is the job of
    :func:`rainbow_decomp.core.factorization.verify_factorization`, so that a
    defective colouring can still be built and diagnosed.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2, description="Even vertex count")
    colours: Tuple[int, ...] = Field(
        ..., description="Flat row-major upper-triangular array of colour ids"
    )

    _matrix: List[List[int]] = PrivateAttr(default_factory=list)

    @field_validator("n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError(f"n must be even, got {v}")
        return v

    @model_validator(mode="after")
    def validate_colours(self) -> "EdgeColouredKn":
        expected = edge_count(self.n)
        if len(self.colours) != expected:
            raise ValueError(
                f"colours must have C(n,2) = {expected} entries, got {len(self.colours)}"
            )
        top = self.n - 2
        for k, c in enumerate(self.colours):
            if c < 0 or c > top:
                u, v = edge_from_index(self.n, k)
                raise ValueError(f"colour {c} of edge ({u},{v}) at position {k} outside [0, {top}]")
        return self

    def model_post_init(self, __context: object) -> None:
        n = self.n
        matrix = [[-1] * n for _ in range(n)]
        k = 0
        for u in range(n):
            row = matrix[u]
            for v in range(u + 1, n):
                c = self.colours[k]
                row[v] = c
                matrix[v][u] = c
                k += 1
        self._matrix = matrix

    @property
    def t(self) -> int:
        """Number of trees in a decomposition, n/2."""
        return self.n // 2

    @property
    def colour_count(self) -> int:
        return self.n - 1

    @property
    def matrix(self) -> List[List[int]]:
        """Symmetric colour matrix with -1 on the diagonal (read-only by convention)."""
        return self._matrix

    def colour_of(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError(f"Loop at vertex {u} has no colour")
        return self._matrix[u][v]

    def edges(self) -> Iterator[Edge]:
        n = self.n
        for u in range(n):
            for v in range(u + 1, n):
                yield (u, v)

    def colour_classes(self) -> Dict[int, List[Edge]]:
        """Map every colour id in use to its sorted edge list."""
        classes: Dict[int, List[Edge]] = {}
        for k, c in enumerate(self.colours):
            classes.setdefault(c, []).append(edge_from_index(self.n, k))
        return classes

    def colour_class(self, c: int) -> List[Edge]:
        row = self._matrix
        return [
            (u, v) for u in range(self.n) for v in range(u + 1, self.n) if row[u][v] == c
        ]

    @classmethod
    def from_matrix(cls, matrix: List[List[int]]) -> "EdgeColouredKn":
        n = len(matrix)
        flat = [matrix[u][v] for u in range(n) for v in range(u + 1, n)]
        return cls(n=n, colours=tuple(flat))


class EdgeSet(BaseModel):
    """A set of edges of K_n; pairs are normalized to ``(min, max)``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=1)
    edges: FrozenSet[Edge] = Field(default_factory=frozenset)

    @model_validator(mode="before")
    @classmethod
    def normalize_pairs(cls, data: object) -> object:
        if isinstance(data, dict) and "edges" in data:
            pairs = []
            for pair in data["edges"]:
                u, v = pair
                if u == v:
                    raise ValueError(f"Loop ({u},{v}) is not an edge")
                pairs.append((u, v) if u < v else (v, u))
            data = {**data, "edges": frozenset(pairs)}
        return data

    @model_validator(mode="after")
    def validate_range(self) -> "EdgeSet":
        for u, v in self.edges:
            if u < 0 or v >= self.n:
                raise ValueError(f"Edge ({u},{v}) outside vertex range [0, {self.n - 1}]")
        return self

    @classmethod
    def of(cls, n: int, edges: Iterable[Edge]) -> "EdgeSet":
        return cls(n=n, edges=list(edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: object) -> bool:
        if isinstance(edge, tuple) and len(edge) == 2:
            u, v = edge
            return (min(u, v), max(u, v)) in self.edges
        return False

    def adjacency(self) -> List[set]:
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)


ViolationKind = Literal[
    "set-size",
    "vertex-incidence",
    "vertex-degree",
    "colour-incidence",
    "colour-multiplicity",
]


class BoundednessViolation(BaseModel):
    """One failure of m-boundedness."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ViolationKind
    witness: int = Field(..., description="Index i, vertex v or colour c")
    observed: int


class BoundednessReport(BaseModel):
    """Outcome of an m-boundedness check; empty violations iff bounded."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    m: int
    violations: List[BoundednessViolation] = Field(default_factory=list)

    @property
    def bounded(self) -> bool:
        return not self.violations


class FactorizationViolation(BaseModel):
    """One reason a colouring of K_n is not a 1-factorization."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["colour-count", "vertex-repeat", "class-size"]
    colour: Optional[int] = None
    vertex: Optional[int] = None
    observed: int


class DecompositionAudit(BaseModel):
    """Verdict of :func:`verify_decomposition` with diagnostics."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    valid: bool
    diagnostics: List[str] = Field(default_factory=list)


__all__ = [
    "Edge",
    "edge_key",
    "edge_count",
    "edge_index",
    "edge_from_index",
    "vertices_for_edge_total",
    "EdgeColouredKn",
    "EdgeSet",
    "ViolationKind",
    "BoundednessViolation",
    "BoundednessReport",
    "FactorizationViolation",
    "DecompositionAudit",
]
