"""Encoding of rainbow ℓ-cycles as a hypergraph, and decoding of matchings back to cycles.

Vertex layout of the cycle hypergraph for ``K_n`` with ``t`` indices:

* ``[0, C(n,2))``: the edges of ``K_n`` by :func:`rainbow_decomp.models.edge_index`;
* ``E + i·n + v``: the pair (index i, vertex v);
* ``E + t·n + i·(n−1) + c``: the pair (index i, colour c).

A rainbow cycle F at index i becomes the hyperedge made of its edges, the
pairs (i, v) for its vertices and the pairs (i, c) for its colours, so every
hyperedge has exactly 3ℓ vertices and a matching is a set of cycles that are
edge-disjoint overall and vertex- and colour-disjoint within each index.
"""

import random
from typing import Annotated, Dict, List, Literal, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.hypermatch.hypergraph import Hypergraph
from rainbow_decomp.models import EdgeColouredKn, EdgeSet, edge_count, edge_from_index, edge_index, edge_key
from rainbow_decomp.utils.errors import BudgetExceededError, InternalInconsistencyError, InvalidArgumentError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)

MAX_EXHAUSTIVE_LENGTH = 5


class ExhaustiveEnumeration(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["exhaustive"] = "exhaustive"


class SampledEnumeration(BaseModel):
    """``walks`` random walks per index; closed rainbow walks are kept, the rest rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["sampled"] = "sampled"
    walks: int = Field(..., gt=0)
    seed: int = Field(default=0, ge=0)


CycleEnumeration = Annotated[
    Union[ExhaustiveEnumeration, SampledEnumeration], Field(discriminator="kind")
]


class CycleLayout(BaseModel):
    """Flattened vertex-id arithmetic of the cycle hypergraph."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=2)
    t: int = Field(..., ge=0)
    length: int = Field(..., ge=3)

    @property
    def edge_block(self) -> int:
        return edge_count(self.n)

    @property
    def vertex_count(self) -> int:
        return self.edge_block + self.t * self.n + self.t * (self.n - 1)

    def vertex_id(self, i: int, v: int) -> int:
        return self.edge_block + i * self.n + v

    def colour_id(self, i: int, c: int) -> int:
        return self.edge_block + self.t * self.n + i * (self.n - 1) + c

    def decode(self, x: int) -> Tuple[str, int, int]:
        """``("edge", k, -1)``, ``("vertex", i, v)`` or ``("colour", i, c)``."""
        if x < self.edge_block:
            return ("edge", x, -1)
        x -= self.edge_block
        if x < self.t * self.n:
            return ("vertex", x // self.n, x % self.n)
        x -= self.t * self.n
        return ("colour", x // (self.n - 1), x % (self.n - 1))


class RainbowCycle(BaseModel):
    """A rainbow cycle assigned to index ``index``; ``vertices`` in cyclic order."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    index: int
    vertices: Tuple[int, ...]
    colours: Tuple[int, ...] = Field(..., description="Colour of vertices[j] vertices[j+1]")

    def edges(self) -> List[Tuple[int, int]]:
        k = len(self.vertices)
        return [edge_key(self.vertices[j], self.vertices[(j + 1) % k]) for j in range(k)]


class CycleHypergraph(BaseModel):
    """The cycle hypergraph together with its layout."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    hypergraph: Hypergraph
    layout: CycleLayout


def _canonical(cycle: Sequence[int]) -> Tuple[int, ...]:
    k = len(cycle)
    s = min(range(k), key=cycle.__getitem__)
    rotated = [cycle[(s + j) % k] for j in range(k)]
    if rotated[1] > rotated[-1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def _allowed_adjacency(
    g: EdgeColouredKn, vertices: Set[int], colours: Set[int], host: Optional[EdgeSet]
) -> Dict[int, List[int]]:
    adj: Dict[int, List[int]] = {v: [] for v in vertices}
    for u in vertices:
        for v in vertices:
            if u < v and g.colour_of(u, v) in colours and (host is None or (u, v) in host):
                adj[u].append(v)
                adj[v].append(u)
    return {v: sorted(ns) for v, ns in adj.items()}


def _enumerate_exhaustive(
    g: EdgeColouredKn, adj: Dict[int, List[int]], length: int
) -> List[Tuple[int, ...]]:
    found: List[Tuple[int, ...]] = []
    for start in sorted(adj):
        stack: List[Tuple[List[int], Set[int]]] = [([start], set())]
        while stack:
            path, used = stack.pop()
            tail = path[-1]
            if len(path) == length:
                if start in adj[tail] and path[1] < path[-1]:
                    closing = g.colour_of(tail, start)
                    if closing not in used:
                        found.append(tuple(path))
                continue
            for w in adj[tail]:
                if w <= start or w in path:
                    continue
                c = g.colour_of(tail, w)
                if c in used:
                    continue
                stack.append((path + [w], used | {c}))
    return sorted(found)


def _enumerate_sampled(
    g: EdgeColouredKn, adj: Dict[int, List[int]], length: int, walks: int, rng: random.Random
) -> List[Tuple[int, ...]]:
    found: Set[Tuple[int, ...]] = set()
    starts = sorted(v for v, ns in adj.items() if ns)
    if not starts:
        return []
    for _ in range(walks):
        path = [rng.choice(starts)]
        used: Set[int] = set()
        while len(path) < length:
            options = [w for w in adj[path[-1]] if w not in path and g.colour_of(path[-1], w) not in used]
            if not options:
                break
            w = rng.choice(options)
            used.add(g.colour_of(path[-1], w))
            path.append(w)
        if len(path) == length and path[0] in adj[path[-1]] and g.colour_of(path[-1], path[0]) not in used:
            found.add(_canonical(path))
    return sorted(found)


def build_cycle_hypergraph(
    g: EdgeColouredKn,
    vertex_sets: Sequence[Sequence[int]],
    colour_sets: Sequence[Sequence[int]],
    length: int,
    enumeration: Optional[CycleEnumeration] = None,
    host: Optional[EdgeSet] = None,
) -> CycleHypergraph:
    """One hyperedge per rainbow ``length``-cycle F with V(F) ⊆ V_i and colours in C_i.

    Families: ``vertices[i]`` = {i}×V_i, ``colours[i]`` = {i}×C_i,
    ``vertex-incidence[v]`` = {(i, v) : v ∈ V_i} and ``colour-incidence[c]``
    = {(i, c) : c ∈ C_i}; empty families are omitted.

    Args:
        g: Coloured complete graph
        vertex_sets: V_1..V_t
        colour_sets: C_1..C_t
        length: Cycle length ℓ ≥ 3
        enumeration: Exhaustive (ℓ ≤ 5, default) or sampled random walks
        host: Optional edge set the cycles must lie in

    Raises:
        InvalidArgumentError: On mismatched index counts or ℓ < 3
        BudgetExceededError: For exhaustive enumeration with ℓ > 5
    """
    enumeration = enumeration or ExhaustiveEnumeration()
    if len(vertex_sets) != len(colour_sets):
        raise InvalidArgumentError(
            message=f"{len(vertex_sets)} vertex sets but {len(colour_sets)} colour sets"
        )
    if length < 3:
        raise InvalidArgumentError(message=f"Cycle length must be at least 3, got {length}")
    if isinstance(enumeration, ExhaustiveEnumeration) and length > MAX_EXHAUSTIVE_LENGTH:
        raise BudgetExceededError(
            message=f"Exhaustive enumeration supports cycle lengths up to {MAX_EXHAUSTIVE_LENGTH}, got {length}",
            details={"length": length},
        )

    t = len(vertex_sets)
    layout = CycleLayout(n=g.n, t=t, length=length)
    rng = random.Random(enumeration.seed if isinstance(enumeration, SampledEnumeration) else 0)
    edges: List[Tuple[int, ...]] = []
    families: Dict[str, List[int]] = {}
    vertex_incidence: Dict[int, List[int]] = {}
    colour_incidence: Dict[int, List[int]] = {}

    for i in range(t):
        vs = set(vertex_sets[i])
        cs = set(colour_sets[i])
        families[f"vertices[{i}]"] = [layout.vertex_id(i, v) for v in sorted(vs)]
        families[f"colours[{i}]"] = [layout.colour_id(i, c) for c in sorted(cs)]
        for v in vs:
            vertex_incidence.setdefault(v, []).append(layout.vertex_id(i, v))
        for c in cs:
            colour_incidence.setdefault(c, []).append(layout.colour_id(i, c))

        adj = _allowed_adjacency(g, vs, cs, host)
        if isinstance(enumeration, ExhaustiveEnumeration):
            cycles = _enumerate_exhaustive(g, adj, length)
        else:
            cycles = _enumerate_sampled(g, adj, length, enumeration.walks, rng)

        for cycle in cycles:
            hyperedge = []
            for j in range(length):
                u, w = cycle[j], cycle[(j + 1) % length]
                hyperedge.append(edge_index(g.n, u, w))
                hyperedge.append(layout.vertex_id(i, u))
                hyperedge.append(layout.colour_id(i, g.colour_of(u, w)))
            edges.append(tuple(sorted(hyperedge)))
        logger.debug("Cycles enumerated", index=i, cycles=len(cycles), operation="build_cycle_hypergraph")

    for v in sorted(vertex_incidence):
        families[f"vertex-incidence[{v}]"] = vertex_incidence[v]
    for c in sorted(colour_incidence):
        families[f"colour-incidence[{c}]"] = colour_incidence[c]
    families = {name: members for name, members in families.items() if members}

    h = Hypergraph.build(layout.vertex_count, edges, families)
    if any(len(e) != 3 * length for e in h.edges):
        raise InternalInconsistencyError(message=f"Cycle hypergraph is not {3 * length}-uniform")
    logger.info(
        "Cycle hypergraph built",
        n=g.n,
        indices=t,
        length=length,
        hyperedges=h.edge_count,
        operation="build_cycle_hypergraph",
    )
    return CycleHypergraph(hypergraph=h, layout=layout)


def _decode_hyperedge(g: EdgeColouredKn, layout: CycleLayout, hyperedge: Sequence[int]) -> RainbowCycle:
    indices: Set[int] = set()
    cycle_edges: List[Tuple[int, int]] = []
    vertex_pairs: Set[int] = set()
    colour_pairs: Set[int] = set()
    for x in hyperedge:
        kind, a, b = layout.decode(x)
        if kind == "edge":
            cycle_edges.append(edge_from_index(g.n, a))
        else:
            indices.add(a)
            (vertex_pairs if kind == "vertex" else colour_pairs).add(b)
    if len(indices) != 1:
        raise InternalInconsistencyError(message=f"Hyperedge spans indices {sorted(indices)}")

    adj: Dict[int, List[int]] = {}
    for u, v in cycle_edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(len(ns) != 2 for ns in adj.values()) or set(adj) != vertex_pairs:
        raise InternalInconsistencyError(message="Hyperedge edges do not form a cycle on its vertices")
    start = min(adj)
    order = [start, min(adj[start])]
    while len(order) < len(adj):
        a, b = adj[order[-1]]
        order.append(a if a != order[-2] else b)
    if order[-1] not in adj[start] or len(order) != len(cycle_edges):
        raise InternalInconsistencyError(message="Hyperedge edges do not form a single cycle")
    colours = tuple(g.colour_of(order[j], order[(j + 1) % len(order)]) for j in range(len(order)))
    if set(colours) != colour_pairs:
        raise InternalInconsistencyError(message="Hyperedge colours disagree with its edges")
    return RainbowCycle(index=indices.pop(), vertices=tuple(order), colours=colours)


def extract_disjoint_families(
    g: EdgeColouredKn, ch: CycleHypergraph, matching: Sequence[int]
) -> List[List[RainbowCycle]]:
    """Decode a matching of the cycle hypergraph into per-index cycle families.

    Re-verifies that each decoded cycle is rainbow, that cycles of one index
    are vertex- and colour-disjoint, and that all cycles are edge-disjoint.

    Raises:
        InternalInconsistencyError: If any of these checks fails
    """
    layout = ch.layout
    families: List[List[RainbowCycle]] = [[] for _ in range(layout.t)]
    used_edges: Set[Tuple[int, int]] = set()
    used_vertices: List[Set[int]] = [set() for _ in range(layout.t)]
    used_colours: List[Set[int]] = [set() for _ in range(layout.t)]

    for k in sorted(matching):
        cycle = _decode_hyperedge(g, layout, ch.hypergraph.edges[k])
        i = cycle.index
        if len(set(cycle.colours)) != len(cycle.colours):
            raise InternalInconsistencyError(message=f"Decoded cycle {cycle.vertices} is not rainbow")
        if used_vertices[i] & set(cycle.vertices) or used_colours[i] & set(cycle.colours):
            raise InternalInconsistencyError(
                message=f"Cycles of index {i} share a vertex or colour",
                details={"index": i, "cycle": list(cycle.vertices)},
            )
        edges = set(cycle.edges())
        if used_edges & edges:
            raise InternalInconsistencyError(
                message="Decoded cycles share an edge",
                details={"edges": sorted(used_edges & edges)},
            )
        used_vertices[i] |= set(cycle.vertices)
        used_colours[i] |= set(cycle.colours)
        used_edges |= edges
        families[i].append(cycle)
    return families


__all__ = [
    "MAX_EXHAUSTIVE_LENGTH",
    "ExhaustiveEnumeration",
    "SampledEnumeration",
    "CycleEnumeration",
    "CycleLayout",
    "RainbowCycle",
    "CycleHypergraph",
    "build_cycle_hypergraph",
    "extract_disjoint_families",
]
