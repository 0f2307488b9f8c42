"""Almost spanning rainbow paths from nibble-packed rainbow cycles.

Each V_i, C_i and the host are split in two. Rainbow ℓ-cycles are packed in
the first halves through the cycle hypergraph and the nibble, each packed cycle
is opened into a path by dropping its closing edge, and the opened cycles of
index i are chained into one path through single connecting vertices taken
from the second halves.
"""

from typing import List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.core.splits import random_split
from rainbow_decomp.hypermatch.cycles import (
    CycleEnumeration,
    build_cycle_hypergraph,
    extract_disjoint_families,
)
from rainbow_decomp.hypermatch.matching import MatchingReport, nibble_matching
from rainbow_decomp.models import Edge, EdgeColouredKn, EdgeSet, edge_key
from rainbow_decomp.utils.errors import InternalInconsistencyError, InvalidArgumentError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)


class PathDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    paths: List[List[int]] = Field(..., description="Vertex sequence of each P_i")
    cycles_packed: List[int]
    connections_failed: int
    report: MatchingReport
    vertex_coverage: List[float]
    colour_coverage: List[float]

    def edges(self, i: int) -> List[Edge]:
        p = self.paths[i]
        return [edge_key(p[k], p[k + 1]) for k in range(len(p) - 1)]


class PathLinker:
    """Greedy 2-path connections w with both edges usable and of new spare colours."""

    def __init__(
        self,
        g: EdgeColouredKn,
        spare_vertices: Sequence[int],
        spare_colours: Set[int],
        host: Optional[EdgeSet],
        used_edges: Set[Edge],
    ):
        self.g = g
        self.spare = list(spare_vertices)
        self.colours = spare_colours
        self.host = host
        self.used_edges = used_edges

    def _usable(self, u: int, v: int, colour_taken: Set[int]) -> bool:
        e = edge_key(u, v)
        if e in self.used_edges or (self.host is not None and e not in self.host):
            return False
        c = self.g.colour_of(u, v)
        return c in self.colours and c not in colour_taken

    def connect(self, end: int, start: int, taken: Set[int], colour_taken: Set[int]) -> Optional[int]:
        for w in self.spare:
            if w in taken or not self._usable(end, w, colour_taken):
                continue
            c1 = self.g.colour_of(end, w)
            if self._usable(w, start, colour_taken | {c1}):
                return w
        return None


def approximate_path_decomposition(
    g: EdgeColouredKn,
    vertex_sets: Sequence[Sequence[int]],
    colour_sets: Sequence[Sequence[int]],
    host: Optional[EdgeSet] = None,
    length: int = 3,
    bite: float = 0.1,
    rounds: int = 30,
    seed: int = 0,
    reserve: float = 0.25,
    enumeration: Optional[CycleEnumeration] = None,
) -> PathDecomposition:
    """Pack rainbow paths P_i inside V_i with colours in C_i, edge-disjoint across i.

    Args:
        g: Coloured complete graph
        vertex_sets: V_1..V_t
        colour_sets: C_1..C_t
        host: Edges available to the paths (all of K_n when None)
        length: Cycle length ℓ of the packed cycles
        bite: Nibble bite
        rounds: Nibble rounds
        seed: RNG seed
        reserve: Share of each V_i and C_i kept back for the connections

    Raises:
        InvalidArgumentError: On mismatched index counts or a reserve outside (0, 1)
        InternalInconsistencyError: If an assembled path fails its audit
    """
    if len(vertex_sets) != len(colour_sets):
        raise InvalidArgumentError(
            message=f"{len(vertex_sets)} vertex sets but {len(colour_sets)} colour sets"
        )
    if not 0 < reserve < 1:
        raise InvalidArgumentError(message=f"reserve must lie in (0, 1), got {reserve}")
    t = len(vertex_sets)
    split_v = [random_split(vs, [1 - reserve, reserve], seed + i) for i, vs in enumerate(vertex_sets)]
    split_c = [random_split(cs, [1 - reserve, reserve], seed + t + i) for i, cs in enumerate(colour_sets)]
    host_edges = host.sorted_edges() if host is not None else list(g.edges())
    cycle_edges, link_edges = random_split(host_edges, [0.5, 0.5], seed + 2 * t)
    cycle_host = EdgeSet.of(g.n, cycle_edges)
    link_host = EdgeSet.of(g.n, link_edges)

    ch = build_cycle_hypergraph(
        g, [v[0] for v in split_v], [c[0] for c in split_c], length, enumeration, host=cycle_host
    )
    report = nibble_matching(ch.hypergraph, bite, rounds, seed)
    families = extract_disjoint_families(g, ch, report.matching)

    used_edges: Set[Edge] = set()
    for family in families:
        for cycle in family:
            used_edges.update(cycle.edges())

    paths: List[List[int]] = []
    failed = 0
    for i, family in enumerate(families):
        chainer = PathLinker(g, split_v[i][1], set(split_c[i][1]), link_host, used_edges)
        path: List[int] = []
        taken: Set[int] = set()
        colour_taken: Set[int] = set()
        for cycle in family:
            opened = list(cycle.vertices)
            if not path:
                path = opened
            else:
                link: Optional[Tuple[int, List[int]]] = None
                for candidate in (opened, opened[::-1]):
                    w = chainer.connect(path[-1], candidate[0], taken, colour_taken)
                    if w is not None:
                        link = (w, candidate)
                        break
                if link is None:
                    failed += 1
                    continue
                w, candidate = link
                for u, v in ((path[-1], w), (w, candidate[0])):
                    used_edges.add(edge_key(u, v))
                    colour_taken.add(g.colour_of(u, v))
                taken.add(w)
                path = path + [w] + candidate
            taken.update(path)
            colour_taken.update(cycle.colours)
            # the closing edge is dropped, so its colour is free again
            colour_taken.discard(g.colour_of(cycle.vertices[-1], cycle.vertices[0]))
        paths.append(path)

    _audit_paths(g, paths, vertex_sets, colour_sets, host)
    vertex_coverage = [len(p) / len(vs) if vs else 1.0 for p, vs in zip(paths, vertex_sets)]
    colour_coverage = [
        max(len(p) - 1, 0) / len(cs) if cs else 1.0 for p, cs in zip(paths, colour_sets)
    ]
    logger.info(
        "Rainbow paths assembled",
        indices=t,
        cycles=sum(len(f) for f in families),
        connections_failed=failed,
        min_vertex_coverage=round(min(vertex_coverage, default=1.0), 4),
        operation="approximate_path_decomposition",
    )
    return PathDecomposition(
        paths=paths,
        cycles_packed=[len(f) for f in families],
        connections_failed=failed,
        report=report,
        vertex_coverage=vertex_coverage,
        colour_coverage=colour_coverage,
    )


def _audit_paths(
    g: EdgeColouredKn,
    paths: Sequence[Sequence[int]],
    vertex_sets: Sequence[Sequence[int]],
    colour_sets: Sequence[Sequence[int]],
    host: Optional[EdgeSet],
) -> None:
    seen: Set[Edge] = set()
    for i, p in enumerate(paths):
        edges = [edge_key(p[k], p[k + 1]) for k in range(len(p) - 1)]
        colours = [g.colour_of(u, v) for u, v in edges]
        problems = []
        if len(set(p)) != len(p) or not set(p) <= set(vertex_sets[i]):
            problems.append("vertices repeat or leave V_i")
        if len(set(colours)) != len(colours) or not set(colours) <= set(colour_sets[i]):
            problems.append("colours repeat or leave C_i")
        if host is not None and any(e not in host for e in edges):
            problems.append("edge outside the host")
        if seen & set(edges):
            problems.append("edge shared with an earlier path")
        if problems:
            raise InternalInconsistencyError(
                message=f"Path {i} fails its audit: {'; '.join(problems)}",
                details={"index": i, "problems": problems},
            )
        seen |= set(edges)


__all__ = ["PathDecomposition", "PathLinker", "approximate_path_decomposition"]
