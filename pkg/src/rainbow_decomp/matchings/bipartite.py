"""Balanced edge-coloured bipartite graphs and the quasirandomness test."""

from typing import AbstractSet, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from rainbow_decomp.models import Edge, EdgeColouredKn, EdgeSet, edge_key
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)

ColouredEdge = Tuple[int, int, int]


class ColouredBipartite(BaseModel):
    """Bipartite graph between ``left`` and ``right`` with coloured edges ``(a, b, colour)``."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    left: Tuple[int, ...]
    right: Tuple[int, ...]
    edges: Tuple[ColouredEdge, ...] = Field(default=())

    _left_pos: Dict[int, int] = PrivateAttr(default_factory=dict)
    _right_pos: Dict[int, int] = PrivateAttr(default_factory=dict)
    _colour: Dict[Tuple[int, int], int] = PrivateAttr(default_factory=dict)

    @model_validator(mode="after")
    def validate_parts(self) -> "ColouredBipartite":
        if len(self.left) != len(self.right):
            raise ValueError(f"parts are unbalanced: {len(self.left)} vs {len(self.right)}")
        if len(set(self.left)) != len(self.left) or len(set(self.right)) != len(self.right):
            raise ValueError("parts contain repeated vertices")
        if set(self.left) & set(self.right):
            raise ValueError("parts intersect")
        left, right = set(self.left), set(self.right)
        seen = set()
        for a, b, c in self.edges:
            if a not in left or b not in right:
                raise ValueError(f"edge ({a},{b}) does not cross from left to right")
            if c < 0:
                raise ValueError(f"edge ({a},{b}) has negative colour {c}")
            if (a, b) in seen:
                raise ValueError(f"edge ({a},{b}) repeated")
            seen.add((a, b))
        return self

    def model_post_init(self, __context: object) -> None:
        self._left_pos = {a: i for i, a in enumerate(self.left)}
        self._right_pos = {b: j for j, b in enumerate(self.right)}
        self._colour = {(a, b): c for a, b, c in self.edges}

    @property
    def n(self) -> int:
        return len(self.left)

    def colour_of(self, a: int, b: int) -> Optional[int]:
        return self._colour.get((a, b))

    def left_index(self, a: int) -> int:
        return self._left_pos[a]

    def right_index(self, b: int) -> int:
        return self._right_pos[b]

    def adjacency(self) -> List[List[int]]:
        """Right positions adjacent to each left position."""
        adj: List[List[int]] = [[] for _ in self.left]
        for a, b, _ in self.edges:
            adj[self._left_pos[a]].append(self._right_pos[b])
        return [sorted(row) for row in adj]

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.int64)
        for a, b, _ in self.edges:
            m[self._left_pos[a], self._right_pos[b]] = 1
        return m

    def colour_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for _, _, c in self.edges:
            counts[c] = counts.get(c, 0) + 1
        return counts

    def without(self, removed: AbstractSet[Edge]) -> "ColouredBipartite":
        """Copy without the edges whose unordered pair is in ``removed``."""
        kept = tuple(e for e in self.edges if edge_key(e[0], e[1]) not in removed)
        return ColouredBipartite(left=self.left, right=self.right, edges=kept)

    @classmethod
    def from_host(
        cls,
        g: EdgeColouredKn,
        left: Sequence[int],
        right: Sequence[int],
        host: Optional[EdgeSet] = None,
        colours: Optional[AbstractSet[int]] = None,
    ) -> "ColouredBipartite":
        """Bipartite subgraph of ``host`` (default K_n) between the parts, keeping colours in ``colours``."""
        edges = []
        for a in left:
            for b in right:
                if host is not None and (a, b) not in host:
                    continue
                c = g.colour_of(a, b)
                if colours is None or c in colours:
                    edges.append((a, b, c))
        return cls(left=tuple(left), right=tuple(right), edges=tuple(edges))


class QuasirandomWitness(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["degree", "codegree"]
    side: Literal["left", "right"]
    vertices: List[int]
    observed: int
    expected: float
    deviation: float = Field(..., description="|observed - expected| / expected")


class QuasirandomReport(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    quasirandom: bool
    eps: float
    d: float
    worst_degree: Optional[QuasirandomWitness] = None
    worst_codegree: Optional[QuasirandomWitness] = None


def _deviation(observed: np.ndarray, expected: float) -> np.ndarray:
    if expected > 0:
        return np.abs(observed - expected) / expected
    return np.where(observed > 0, np.inf, 0.0)


def _worst_degree(
    degrees: np.ndarray, expected: float, side: Literal["left", "right"], labels: Sequence[int]
) -> Optional[QuasirandomWitness]:
    if degrees.size == 0:
        return None
    dev = _deviation(degrees, expected)
    k = int(np.argmax(dev))
    return QuasirandomWitness(
        kind="degree", side=side, vertices=[labels[k]], observed=int(degrees[k]),
        expected=expected, deviation=float(dev[k]),
    )


def _worst_codegree(
    a: np.ndarray, expected: float, side: Literal["left", "right"], labels: Sequence[int]
) -> Optional[QuasirandomWitness]:
    size = a.shape[0]
    if size < 2:
        return None
    co = a @ a.T
    iu = np.triu_indices(size, k=1)
    values = co[iu]
    dev = _deviation(values, expected)
    k = int(np.argmax(dev))
    return QuasirandomWitness(
        kind="codegree", side=side, vertices=[labels[int(iu[0][k])], labels[int(iu[1][k])]],
        observed=int(values[k]), expected=expected, deviation=float(dev[k]),
    )


def _worse(x: Optional[QuasirandomWitness], y: Optional[QuasirandomWitness]) -> Optional[QuasirandomWitness]:
    if x is None:
        return y
    if y is None:
        return x
    return y if y.deviation > x.deviation else x


def is_quasirandom(g: ColouredBipartite, eps: float, d: float) -> QuasirandomReport:
    """(ε, d)-quasirandomness: degrees (1±ε)d·n and same-side codegrees (1±ε)d²·n.

    Returns the worst degree and codegree witnesses across both sides.
    """
    a = g.matrix()
    n = g.n
    worst_degree = _worse(
        _worst_degree(a.sum(axis=1), d * n, "left", g.left),
        _worst_degree(a.sum(axis=0), d * n, "right", g.right),
    )
    worst_codegree = _worse(
        _worst_codegree(a, d * d * n, "left", g.left),
        _worst_codegree(a.T, d * d * n, "right", g.right),
    )
    ok = all(w is None or w.deviation <= eps + 1e-12 for w in (worst_degree, worst_codegree))
    logger.debug(
        "Quasirandomness checked",
        n=n,
        eps=eps,
        d=d,
        quasirandom=ok,
        operation="is_quasirandom",
    )
    return QuasirandomReport(
        quasirandom=ok, eps=eps, d=d, worst_degree=worst_degree, worst_codegree=worst_codegree
    )


def random_coloured_bipartite(n: int, density: float, colours: int, seed: int) -> ColouredBipartite:
    """Random bipartite graph on parts ``0..n-1`` and ``n..2n-1`` with uniform random colours."""
    rng = np.random.default_rng(seed)
    present = rng.random((n, n)) < density
    palette = rng.integers(0, max(colours, 1), size=(n, n))
    edges = tuple(
        (i, n + j, int(palette[i, j])) for i in range(n) for j in range(n) if present[i, j]
    )
    return ColouredBipartite(left=tuple(range(n)), right=tuple(range(n, 2 * n)), edges=edges)


__all__ = [
    "ColouredEdge",
    "ColouredBipartite",
    "QuasirandomWitness",
    "QuasirandomReport",
    "is_quasirandom",
    "random_coloured_bipartite",
]
