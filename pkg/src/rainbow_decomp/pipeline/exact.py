"""Exact backtracking search for rainbow spanning tree decompositions of small K_n.

A rainbow spanning tree of a 1-factorized K_n uses every one of the n − 1
colours exactly once, so the search assigns, tree by tree, one edge of each
colour. Tree j is forced to contain the j-th edge of colour 0, which removes
the t! symmetry between trees. Within a tree the next colour is the unused
one with the fewest edges joining two different components, and a node is
abandoned as soon as some unused colour has no such edge or the usable edges
can no longer connect the components.

The branching is colour-first on purpose: the search does not grow trees
from the lexicographically smallest component. Any edge of the chosen
colour that joins two components is a candidate, so every completion stays
reachable, and branching on the scarcest colour prunes dead colours before
they are reached.
"""

import random
import time
from typing import Callable, List, Literal, Optional, Sequence, Set

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.core.predicates import verify_decomposition
from rainbow_decomp.models import Edge, EdgeColouredKn, EdgeSet
from rainbow_decomp.settings import get_settings
from rainbow_decomp.trees.canonical import canonical_form
from rainbow_decomp.trees.shape import TreeShape
from rainbow_decomp.utils.errors import ExhaustedError, InternalInconsistencyError, InvalidArgumentError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)

# Clock checks happen once per this many search nodes.
_CLOCK_INTERVAL = 512


class DecompositionResult(BaseModel):
    """Outcome of a complete search: a decomposition, or a refutation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    status: Literal["found", "refuted"]
    n: int
    parts: List[EdgeSet] = Field(default_factory=list)
    nodes: int = Field(..., description="Search nodes expanded")


class _Search:
    def __init__(
        self,
        g: EdgeColouredKn,
        time_budget: float,
        seed: int,
        max_degree: Optional[int] = None,
        accept: Optional[Callable[[List[Edge]], bool]] = None,
    ):
        self.g = g
        self.n = g.n
        self.t = g.n // 2
        self.colours = list(range(g.n - 1))
        rng = random.Random(seed)
        self.classes: List[List[Edge]] = []
        for c in self.colours:
            edges = sorted(g.colour_class(c))
            if c != 0:
                rng.shuffle(edges)
            self.classes.append(edges)
        self.used: Set[Edge] = set()
        self.deadline = time.monotonic() + time_budget
        self.time_budget = time_budget
        self.max_degree = max_degree
        self.accept = accept
        self.nodes = 0
        self.trees: List[List[Edge]] = []

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes % _CLOCK_INTERVAL == 0 and time.monotonic() > self.deadline:
            raise ExhaustedError(
                message=f"Search budget of {self.time_budget:g}s exhausted after {self.nodes} nodes",
                details={"nodes": self.nodes, "trees_completed": len(self.trees)},
            )

    def run(self) -> bool:
        return self._next_tree(0)

    def _next_tree(self, j: int) -> bool:
        if j == self.t:
            return True
        forced = self.classes[0][j]
        comp = list(range(self.n))
        degree = [0] * self.n
        self._join(comp, forced)
        degree[forced[0]] += 1
        degree[forced[1]] += 1
        unused = set(self.colours) - {0}
        return self._extend(j, comp, degree, unused, [forced])

    @staticmethod
    def _join(comp: List[int], e: Edge) -> None:
        a, b = comp[e[0]], comp[e[1]]
        for v in range(len(comp)):
            if comp[v] == b:
                comp[v] = a

    def _free(self, c: int) -> List[Edge]:
        return [e for e in self.classes[c] if e not in self.used]

    def _connectable(self, comp: List[int], unused: Set[int]) -> bool:
        labels = {c: c for c in set(comp)}

        def find(x: int) -> int:
            while labels[x] != x:
                labels[x] = labels[labels[x]]
                x = labels[x]
            return x

        groups = len(labels)
        if groups == 1:
            return True
        for c in unused:
            for u, v in self._free(c):
                a, b = find(comp[u]), find(comp[v])
                if a != b:
                    labels[a] = b
                    groups -= 1
                    if groups == 1:
                        return True
        return False

    def _degree_ok(self, degree: List[int], e: Edge) -> bool:
        if self.max_degree is None:
            return True
        return degree[e[0]] < self.max_degree and degree[e[1]] < self.max_degree

    def _extend(self, j: int, comp: List[int], degree: List[int], unused: Set[int], tree: List[Edge]) -> bool:
        self._tick()
        if not unused:
            if self.accept is not None and not self.accept(tree):
                return False
            self.trees.append(list(tree))
            self.used.update(tree)
            if self._next_tree(j + 1):
                return True
            self.used.difference_update(tree)
            self.trees.pop()
            return False

        best: Optional[int] = None
        best_options: List[Edge] = []
        for c in sorted(unused):
            options = [
                e for e in self._free(c)
                if comp[e[0]] != comp[e[1]] and self._degree_ok(degree, e)
            ]
            if not options:
                return False
            if best is None or len(options) < len(best_options):
                best, best_options = c, options
        if not self._connectable(comp, unused):
            return False

        assert best is not None
        unused.discard(best)
        for e in best_options:
            child = list(comp)
            self._join(child, e)
            degree[e[0]] += 1
            degree[e[1]] += 1
            tree.append(e)
            if self._extend(j, child, degree, unused, tree):
                return True
            tree.pop()
            degree[e[0]] -= 1
            degree[e[1]] -= 1
        unused.add(best)
        return False


def _solve(
    g: EdgeColouredKn,
    time_budget: Optional[float],
    seed: int,
    max_degree: Optional[int] = None,
    accept: Optional[Callable[[List[Edge]], bool]] = None,
) -> DecompositionResult:
    budget = time_budget if time_budget is not None else get_settings().budgets.solver_time_budget
    if g.n == 2:
        parts = [EdgeSet.of(2, [(0, 1)])]
        if accept is not None and not accept([(0, 1)]):
            return DecompositionResult(status="refuted", n=2, nodes=1)
        return DecompositionResult(status="found", n=2, parts=parts, nodes=1)

    search = _Search(g, budget, seed, max_degree=max_degree, accept=accept)
    found = search.run()
    if not found:
        logger.info("Complete search found no decomposition", n=g.n, nodes=search.nodes, operation="exact_decompose")
        return DecompositionResult(status="refuted", n=g.n, nodes=search.nodes)

    parts = [EdgeSet.of(g.n, tree) for tree in search.trees]
    audit = verify_decomposition(g, parts)
    if not audit.valid:
        raise InternalInconsistencyError(
            message="Solver output fails the decomposition audit", details={"diagnostics": audit.diagnostics}
        )
    logger.info("Decomposition found", n=g.n, nodes=search.nodes, operation="exact_decompose")
    return DecompositionResult(status="found", n=g.n, parts=parts, nodes=search.nodes)


def exact_decompose(g: EdgeColouredKn, time_budget: Optional[float] = None, seed: int = 0) -> DecompositionResult:
    """Decompose K_n into n/2 rainbow spanning trees, or refute by complete search.

    Raises:
        ExhaustedError: If the time budget runs out first
    """
    return _solve(g, time_budget, seed)


def isomorphic_decompose(
    g: EdgeColouredKn, shape: TreeShape, time_budget: Optional[float] = None, seed: int = 0
) -> DecompositionResult:
    """Decompose K_n into rainbow spanning trees all isomorphic to ``shape``.

    Partial trees are pruned once a vertex would exceed the maximum degree of
    ``shape``; completed trees are compared by canonical form.

    Raises:
        InvalidArgumentError: If ``shape`` is not a tree on n vertices
        ExhaustedError: If the time budget runs out first
    """
    if shape.vertex_count != g.n or not shape.is_tree():
        raise InvalidArgumentError(
            message=f"Shape must be a tree on {g.n} vertices, got {shape.vertex_count} vertices",
            details={"n": g.n, "shape_vertices": shape.vertex_count},
        )
    target = canonical_form(shape)

    def accept(tree: Sequence[Edge]) -> bool:
        return canonical_form(TreeShape.build(g.n, list(tree))) == target

    return _solve(g, time_budget, seed, max_degree=shape.max_degree(), accept=accept)


__all__ = ["DecompositionResult", "exact_decompose", "isomorphic_decompose"]
