"""Rainbow predicates, the m-boundedness checker and decomposition audits."""

from collections import Counter
from typing import AbstractSet, Iterable, List, Sequence

from rainbow_decomp.models import (
    BoundednessReport,
    BoundednessViolation,
    DecompositionAudit,
    Edge,
    EdgeColouredKn,
    EdgeSet,
    edge_count,
)
from rainbow_decomp.utils.errors import InvalidArgumentError


def _edges_of(s: EdgeSet | Iterable[Edge]) -> Iterable[Edge]:
    return s.edges if isinstance(s, EdgeSet) else s


def is_rainbow(g: EdgeColouredKn, s: EdgeSet | Iterable[Edge]) -> bool:
    """True iff the edges of ``s`` carry pairwise distinct colours."""
    seen = set()
    for u, v in _edges_of(s):
        c = g.colour_of(u, v)
        if c in seen:
            return False
        seen.add(c)
    return True


def colours_of(g: EdgeColouredKn, s: EdgeSet | Iterable[Edge]) -> List[int]:
    return [g.colour_of(u, v) for u, v in _edges_of(s)]


def check_bounded(
    g: EdgeColouredKn,
    G: EdgeSet | Iterable[Edge],
    vertex_sets: Sequence[AbstractSet[int]],
    colour_sets: Sequence[AbstractSet[int]],
    m: int,
) -> BoundednessReport:
    """Enumerate all m-boundedness failures of the triple (G, Vs, Cs).

    Every V_i and C_i must have at most m elements. Every vertex must lie in at
    most m sets V_i and have G-degree at most m. Every colour must lie in at
    most m sets C_i and colour at most m edges of G.

    Raises:
        InvalidArgumentError: If the two set sequences differ in length
    """
    if len(vertex_sets) != len(colour_sets):
        raise InvalidArgumentError(
            message="Vertex and colour set sequences must have equal length",
            details={"vertex_sets": len(vertex_sets), "colour_sets": len(colour_sets)},
        )

    violations: List[BoundednessViolation] = []
    for i, (vs, cs) in enumerate(zip(vertex_sets, colour_sets)):
        if len(vs) > m:
            violations.append(BoundednessViolation(kind="set-size", witness=i, observed=len(vs)))
        if len(cs) > m:
            violations.append(BoundednessViolation(kind="set-size", witness=i, observed=len(cs)))

    vertex_incidence = Counter(v for vs in vertex_sets for v in vs)
    colour_incidence = Counter(c for cs in colour_sets for c in cs)
    degree: Counter = Counter()
    multiplicity: Counter = Counter()
    for u, v in _edges_of(G):
        degree[u] += 1
        degree[v] += 1
        multiplicity[g.colour_of(u, v)] += 1

    for v in sorted(vertex_incidence):
        if vertex_incidence[v] > m:
            violations.append(
                BoundednessViolation(kind="vertex-incidence", witness=v, observed=vertex_incidence[v])
            )
    for v in sorted(degree):
        if degree[v] > m:
            violations.append(BoundednessViolation(kind="vertex-degree", witness=v, observed=degree[v]))
    for c in sorted(colour_incidence):
        if colour_incidence[c] > m:
            violations.append(
                BoundednessViolation(kind="colour-incidence", witness=c, observed=colour_incidence[c])
            )
    for c in sorted(multiplicity):
        if multiplicity[c] > m:
            violations.append(
                BoundednessViolation(kind="colour-multiplicity", witness=c, observed=multiplicity[c])
            )

    return BoundednessReport(m=m, violations=violations)


def bounded_threshold(
    g: EdgeColouredKn,
    G: EdgeSet | Iterable[Edge],
    vertex_sets: Sequence[AbstractSet[int]],
    colour_sets: Sequence[AbstractSet[int]],
) -> int:
    """Smallest m for which the triple is m-bounded."""
    report = check_bounded(g, G, vertex_sets, colour_sets, 0)
    return max((v.observed for v in report.violations), default=0)


def is_spanning_tree(n: int, edges: Iterable[Edge]) -> bool:
    """Union-find test: exactly n-1 edges and no cycle."""
    edge_list = list(edges)
    if len(edge_list) != n - 1:
        return False
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edge_list:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def verify_decomposition(
    g: EdgeColouredKn, parts: Sequence[EdgeSet | Iterable[Edge]]
) -> DecompositionAudit:
    """Check that ``parts`` decompose K_n into rainbow spanning trees."""
    diagnostics: List[str] = []
    owner: dict = {}
    part_edges: List[List[Edge]] = []
    for i, part in enumerate(parts):
        edges = sorted(
            (min(u, v), max(u, v)) for u, v in _edges_of(part)
        )
        part_edges.append(edges)
        if len(set(edges)) != len(edges):
            diagnostics.append(f"overlap: part {i} repeats an edge")
        for e in edges:
            if e[0] < 0 or e[1] >= g.n or e[0] == e[1]:
                diagnostics.append(f"range: edge {e} of part {i} is not an edge of K_{g.n}")
                continue
            if e in owner and owner[e] != i:
                diagnostics.append(f"overlap: edge {e} in parts {owner[e]} and {i}")
            owner.setdefault(e, i)

    missing = edge_count(g.n) - len(owner)
    if missing:
        diagnostics.append(f"coverage: {missing} edges of K_{g.n} are in no part")

    for i, edges in enumerate(part_edges):
        valid_edges = [e for e in edges if 0 <= e[0] < e[1] < g.n]
        if not is_spanning_tree(g.n, valid_edges):
            diagnostics.append(f"part {i}: not a spanning tree ({len(edges)} edges)")
        if not is_rainbow(g, valid_edges):
            diagnostics.append(f"part {i}: not rainbow")

    return DecompositionAudit(valid=not diagnostics, diagnostics=diagnostics)


__all__ = [
    "is_rainbow",
    "colours_of",
    "check_bounded",
    "bounded_threshold",
    "is_spanning_tree",
    "verify_decomposition",
]
