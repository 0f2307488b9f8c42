"""Instrumented rehearsal of the ten-step decomposition strategy.

The vertex, colour and edge splits are drawn with the probabilities of
:class:`PipelineParams`; every step then runs its library component on the
realized cells and reports what it achieved. Nothing here proves anything at
desk scale: a step passes when its component succeeds and its coverage
reaches ``1 - audit_gamma``, and a failed step is data, not an exception.

Covering runs after the link-up here, so the forests reach the F*_i stage at
the end of step 7: a spine of free rainbow edges tops each tree up to exactly
``n - 1 - b - r_i`` edges, where r_i counts the absorber matchings the tree
holds. A tree that cannot be brought to that count fails step 7. Steps 7 and
8 may borrow edge-reservoir edges, at most d per colour, which leaves at least
the d that step 10 absorbs.

Steps and the steps whose output they need:

    1 edge absorbers         2 colour absorbers     3 vertex absorbers
    4 almost spanning paths  5 link-up (1-4)        6 cover edges (5)
    7 cover colours (5)      8 absorb vertices (3, 6, 7)
    9 absorb colours (2, 8)  10 absorb edges (1, 9)
"""

import random
from collections import defaultdict
from itertools import count
from math import ceil, sqrt
from typing import Any, Callable, Dict, Iterator, List, Literal, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.core.predicates import check_bounded, verify_decomposition
from rainbow_decomp.core.splits import random_split
from rainbow_decomp.embed.greedy import EmbeddingPattern, build_task, embed_with_retries
from rainbow_decomp.hypermatch.cycles import MAX_EXHAUSTIVE_LENGTH, ExhaustiveEnumeration, SampledEnumeration
from rainbow_decomp.matchings.bipartite import ColouredBipartite
from rainbow_decomp.matchings.routine import greedy_disjoint_rainbow_pms
from rainbow_decomp.models import Edge, EdgeColouredKn, EdgeSet, edge_key
from rainbow_decomp.pipeline.params import PipelineParams
from rainbow_decomp.pipeline.paths import PathLinker, approximate_path_decomposition
from rainbow_decomp.rmbg.graph import Rmbg
from rainbow_decomp.rmbg.robust import robust_match, search_rmbg_sized
from rainbow_decomp.trees.canonical import canonical_form
from rainbow_decomp.trees.gadgets import build_T
from rainbow_decomp.trees.shape import TreeShape
from rainbow_decomp.utils.errors import (
    InvalidArgumentError,
    RefutationError,
    RetryExhaustedError,
    SearchFailedError,
    wrap_unexpected,
)
from rainbow_decomp.utils.logging import bind_component, get_logger

logger = get_logger(__name__)

StepStatus = Literal["passed", "failed", "skipped", "trivial"]

STEP_NAMES: Dict[int, str] = {
    1: "edge-absorbers",
    2: "colour-absorbers",
    3: "vertex-absorbers",
    4: "almost-spanning-paths",
    5: "link-up",
    6: "cover-edges",
    7: "cover-colours",
    8: "absorb-vertices",
    9: "absorb-colours",
    10: "absorb-edges",
}

DEPENDENCIES: Dict[int, Tuple[int, ...]] = {
    1: (),
    2: (),
    3: (),
    4: (),
    5: (1, 2, 3, 4),
    6: (5,),
    7: (5,),
    8: (3, 6, 7),
    9: (2, 8),
    10: (1, 9),
}

# Absorber RMBGs are searched with this maximum degree.
ABSORBER_MAX_DEGREE = 4


class StepReport(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    step: int = Field(..., ge=1, le=10)
    name: str
    status: StepStatus
    metrics: Dict[str, Any] = Field(default_factory=dict)
    error_type: Optional[str] = None
    message: Optional[str] = None


class SplitAudit(BaseModel):
    """A split row with its weight audit and the realized mean cell sizes."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    parent_weight: float
    total: float
    balanced: bool
    realized: Dict[str, float]


class StrategyReport(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int
    seed: int
    params: Dict[str, Any]
    splits: List[SplitAudit]
    steps: List[StepReport]
    first_failure: Optional[int] = None
    decomposition_verified: bool = False
    isomorphic_to_target: Optional[bool] = None

    @property
    def completed(self) -> bool:
        return all(s.status in ("passed", "trivial") for s in self.steps)


class _Forest:
    """Edges, colours and components of one growing forest F_i."""

    def __init__(self, n: int):
        self.edges: Set[Edge] = set()
        self.colours: Set[int] = set()
        self.parent = list(range(n))
        self.degree = [0] * n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def accepts(self, e: Edge, colour: int) -> bool:
        return colour not in self.colours and self.find(e[0]) != self.find(e[1])

    def add(self, e: Edge, colour: int) -> None:
        self.parent[self.find(e[0])] = self.find(e[1])
        self.edges.add(e)
        self.colours.add(colour)
        self.degree[e[0]] += 1
        self.degree[e[1]] += 1

    def vertices(self) -> List[int]:
        return [v for v, d in enumerate(self.degree) if d]


class _EdgeAbsorber(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    colour: int
    trees: List[int]
    graph: Rmbg
    reservoir: List[Edge]
    buffer: List[Edge]

    def right_edge(self, r: int) -> Edge:
        y = len(self.reservoir)
        return self.reservoir[r] if r < y else self.buffer[r - y]


class _ColourAbsorber(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tree: int
    graph: Rmbg
    palette: List[int] = Field(..., description="Y colours (C′_1) first, then Z colours (C′_2)")
    slots: Dict[Tuple[int, int], Edge] = Field(..., description="(matching j, right vertex r) -> edge")


class _Run:
    def __init__(self, g: EdgeColouredKn, params: PipelineParams, seed: int):
        self.g = g
        self.params = params
        self.seed = seed
        self.n = g.n
        self.t = g.n // 2
        self.threshold = 1 - params.audit_gamma
        self.rng = random.Random(seed)
        self._seeds: Iterator[int] = count(seed * 7919)
        self.vertex_cells: List[Dict[str, List[int]]] = []
        self.colour_cells: List[Dict[str, List[int]]] = []
        self.edge_cells: Dict[str, List[Edge]] = {}
        self.split_audit: List[SplitAudit] = []
        self._edge_store: Dict[int, _EdgeAbsorber] = {}
        self._colour_store: Dict[int, _ColourAbsorber] = {}
        self._reservoir_colour: Dict[Edge, int] = {}
        self._spare: Dict[int, int] = {}
        self._holdings: Dict[int, int] = defaultdict(int)
        self.q_paths: List[List[int]] = [[] for _ in range(self.t)]
        self.p_paths: List[List[int]] = [[] for _ in range(self.t)]
        self.forests = [_Forest(self.n) for _ in range(self.t)]
        self.used: Set[Edge] = set()
        self.reserved: Set[Edge] = set()
        self.verified = False
        self.isomorphic: Optional[bool] = None

    # --- splits ---

    def _cells(self, universe: List[Any], row_name: str) -> Dict[str, List[Any]]:
        row = next(r for r in self.params.split_table() if r.name == row_name)
        parts = random_split(universe, row.normalized(), next(self._seeds))
        return {name: part for (name, _), part in zip(row.cells, parts)}

    def split(self) -> None:
        for _ in range(self.t):
            v = self._cells(list(range(self.n)), "vertices")
            v.update(self._cells(v["U"], "U"))
            v.update(self._cells(v["B"], "B"))
            self.vertex_cells.append(v)
            c = self._cells(list(range(self.n - 1)), "colours")
            c.update(self._cells(c["C_1"], "C_1"))
            self.colour_cells.append(c)
        e = self._cells(list(self.g.edges()), "edges")
        e.update(self._cells(e["G_1"], "G_1"))
        self.edge_cells = e

        per_tree = {"vertices": self.vertex_cells, "U": self.vertex_cells, "B": self.vertex_cells}
        per_tree.update({"colours": self.colour_cells, "C_1": self.colour_cells})
        for row in self.params.split_table():
            if row.name in per_tree:
                cells = per_tree[row.name]
                realized = {
                    name: sum(len(c[name]) for c in cells) / max(len(cells), 1) for name, _ in row.cells
                }
            else:
                realized = {name: float(len(self.edge_cells[name])) for name, _ in row.cells}
            self.split_audit.append(
                SplitAudit(
                    name=row.name,
                    parent_weight=row.parent_weight,
                    total=row.total,
                    balanced=row.balanced,
                    realized=realized,
                )
            )

    # --- helpers ---

    def _free(self, e: Edge) -> bool:
        return e not in self.used and e not in self.reserved

    def _spare_reservoir(self, e: Edge) -> bool:
        """Reserved reservoir edge whose colour can still give one away.

        Each edge absorber of deficiency d lends at most d of its 2d reservoir
        edges, so at least d are left for the final absorption.
        """
        c = self._reservoir_colour.get(e)
        return c is not None and e in self.reserved and e not in self.used and self._spare[c] > 0

    def _available(self, e: Edge, reservoir: bool = False) -> bool:
        return self._free(e) or (reservoir and self._spare_reservoir(e))

    def _by_colour(self, edges: List[Edge]) -> Dict[int, List[Edge]]:
        table: Dict[int, List[Edge]] = defaultdict(list)
        for e in edges:
            table[self.g.colour_of(*e)].append(e)
        return table

    def _forbidden_colours(self, i: int) -> Set[int]:
        """Colours tree i may only receive through its absorbers."""
        return set(self.colour_cells[i]["C_2"]) | set(self.colour_cells[i]["D"])

    def _palette_y(self, i: int) -> Set[int]:
        absorber = self._colour_store.get(i)
        return set(absorber.palette[: 2 * self.params.s]) if absorber else set()

    def _blocked_colours(self, i: int) -> Set[int]:
        """Forbidden colours plus the colour absorber's Y palette, which only step 7 may spend."""
        return self._forbidden_colours(i) | self._palette_y(i)

    def _slots(self, i: int) -> int:
        """r_i: one edge per absorber matching tree i still has to receive."""
        return self._holdings[i] + (3 * self.params.s if i in self._colour_store else 0)

    def _target(self, i: int) -> int:
        """Edge count of tree i once it reaches the F*_i stage."""
        return self.n - 1 - self.params.b - self._slots(i)

    def _grow(self, i: int, e: Edge, reservoir: bool = False) -> bool:
        c = self.g.colour_of(*e)
        forest = self.forests[i]
        lent = reservoir and self._spare_reservoir(e)
        if not (self._free(e) or lent) or not forest.accepts(e, c):
            return False
        forest.add(e, c)
        self.used.add(e)
        if lent:
            self._spare[c] -= 1
        return True

    def _attach_spine(self, i: int, target: int) -> bool:
        """Grow forest i with free rainbow edges until it has ``target`` edges.

        Vertices of B_{i,2} stay outside so the vertex absorption keeps them.
        """
        forest = self.forests[i]
        barred = set(self.vertex_cells[i]["B_2"])
        blocked = self._blocked_colours(i)
        candidates = [e for e in self.g.edges() if self._free(e) and self.g.colour_of(*e) not in blocked]
        self.rng.shuffle(candidates)
        progress = True
        while len(forest.edges) < target and progress:
            progress = False
            present = set(forest.vertices())
            for e in candidates:
                if len(forest.edges) >= target:
                    break
                if any(v in barred and v not in present for v in e):
                    continue
                if self._grow(i, e):
                    present.update(e)
                    progress = True
        return len(forest.edges) == target

    def _ratio(self, done: int, total: int) -> float:
        return done / total if total else 1.0

    # --- steps ---

    def edge_absorbers(self) -> Tuple[bool, Dict[str, Any]]:
        holders: Dict[int, List[int]] = defaultdict(list)
        for i, cells in enumerate(self.colour_cells):
            for c in cells["D"]:
                holders[c].append(i)
        reservoir_edges = [
            e for name in ("G_rb", "G_tri1", "G_tri2", "G_tri3", "G_circ2") for e in self.edge_cells[name]
        ]
        reservoir = self._by_colour(reservoir_edges)
        buffer = self._by_colour(self.edge_cells["G_2"])

        short: List[int] = []
        failed: List[int] = []
        inside = total = 0
        for c in sorted(holders):
            trees = holders[c]
            x = len(trees)
            d = x // 3
            ys = [e for e in reservoir.get(c, []) if self._free(e)][: 2 * d]
            zs = [e for e in buffer.get(c, []) if self._free(e)][: x - d]
            if len(ys) < 2 * d or len(zs) < x - d:
                short.append(c)
                continue
            try:
                h = search_rmbg_sized(x, 2 * d, x - d, ABSORBER_MAX_DEGREE, next(self._seeds))
            except SearchFailedError:
                failed.append(c)
                continue
            absorber = _EdgeAbsorber(colour=c, trees=trees, graph=h, reservoir=ys, buffer=zs)
            self._edge_store[c] = absorber
            self.reserved.update(ys + zs)
            self._reservoir_colour.update((e, c) for e in ys)
            self._spare[c] = d
            for i in trees:
                self._holdings[i] += 1
            for x_index, row in enumerate(h.adjacency):
                v_mc = set(self.vertex_cells[trees[x_index]]["V_mc"])
                for r in row:
                    a, b = absorber.right_edge(r)
                    inside += a in v_mc and b in v_mc
                    total += 1

        colours = len(holders)
        metrics = {
            "colours": colours,
            "absorbers": len(self._edge_store),
            "short_colours": len(short),
            "search_failures": len(failed),
            "mean_holders": round(sum(len(v) for v in holders.values()) / max(colours, 1), 4),
            "target_holders": 3 * self.params.m,
            "mc_containment": round(self._ratio(inside, total), 4),
        }
        ok = not failed and len(short) <= self.params.audit_gamma * max(colours, 1)
        return ok, metrics

    def colour_absorbers(self) -> Tuple[bool, Dict[str, Any]]:
        s = self.params.s
        if s < 1:
            return True, {"s": s, "absorbers": 0}
        pool = self._by_colour([e for e in self.edge_cells["G_rb"] if self._free(e)])
        short = failed = inside = total = 0
        for i, cells in enumerate(self.colour_cells):
            ys, zs = cells["C_1"], cells["C_2"]
            if len(ys) < 2 * s or len(zs) < 2 * s:
                short += 1
                continue
            palette = self.rng.sample(ys, 2 * s) + self.rng.sample(zs, 2 * s)
            try:
                h = search_rmbg_sized(3 * s, 2 * s, 2 * s, ABSORBER_MAX_DEGREE, next(self._seeds))
            except SearchFailedError:
                failed += 1
                continue
            taken: Set[int] = set()
            slots: Dict[Tuple[int, int], Edge] = {}
            for j, row in enumerate(h.adjacency):
                for r in row:
                    choice = next(
                        (e for e in pool.get(palette[r], []) if self._free(e) and not taken & set(e)), None
                    )
                    if choice is None:
                        break
                    slots[(j, r)] = choice
                    taken.update(choice)
            if len(slots) != h.edge_count:
                short += 1
                continue
            self._colour_store[i] = _ColourAbsorber(tree=i, graph=h, palette=palette, slots=slots)
            self.reserved.update(slots.values())
            v_rb = set(self.vertex_cells[i]["V_rb"])
            inside += sum(a in v_rb and b in v_rb for a, b in slots.values())
            total += len(slots)

        metrics = {
            "s": s,
            "absorbers": len(self._colour_store),
            "short_trees": short,
            "search_failures": failed,
            "rb_containment": round(self._ratio(inside, total), 4),
        }
        return failed == 0 and short <= self.params.audit_gamma * self.t, metrics

    def vertex_absorbers(self) -> Tuple[bool, Dict[str, Any]]:
        covered = wanted = stuck = 0
        for i in range(self.t):
            a_cell = self.vertex_cells[i]["A"]
            colours = self.colour_cells[i]["C_bullet"]
            wanted += len(a_cell)
            length = min(len(a_cell), len(colours) + 1)
            if length < 2:
                self.q_paths[i] = a_cell[:length]
                covered += length
                continue
            host = EdgeSet.of(self.n, [e for e in self.edge_cells["G_bullet"] if self._free(e)])
            pattern = EmbeddingPattern(
                vertex_count=length,
                edges=[(k, k + 1) for k in range(length - 1)],
                target_vertices=tuple(a_cell),
                colours=tuple(colours),
            )
            try:
                result = embed_with_retries(build_task(self.g, [pattern], 1.0, host), next(self._seeds))
            except RetryExhaustedError:
                stuck += 1
                continue
            path = [result.placements[0][k] for k in range(length)]
            self.q_paths[i] = path
            for k in range(length - 1):
                self._grow(i, edge_key(path[k], path[k + 1]))
            covered += length
        coverage = self._ratio(covered, wanted)
        metrics = {"coverage": round(coverage, 4), "stuck": stuck, "vertices": wanted}
        return coverage >= self.threshold, metrics

    def almost_spanning_paths(self) -> Tuple[bool, Dict[str, Any]]:
        length = self.params.cycle_length
        enumeration = (
            ExhaustiveEnumeration()
            if length <= MAX_EXHAUSTIVE_LENGTH
            else SampledEnumeration(walks=20 * self.n, seed=self.seed)
        )
        host_edges = [e for name in ("G_circ1", "G_circ2") for e in self.edge_cells[name] if self._free(e)]
        result = approximate_path_decomposition(
            self.g,
            [cells["V_circ"] for cells in self.vertex_cells],
            [
                [c for c in cells["C_circ1"] + cells["C_circ2"] if c not in self._palette_y(i)]
                for i, cells in enumerate(self.colour_cells)
            ],
            host=EdgeSet.of(self.n, host_edges),
            length=length,
            seed=next(self._seeds),
            enumeration=enumeration,
        )
        for i, path in enumerate(result.paths):
            self.p_paths[i] = path
            for e in result.edges(i):
                self._grow(i, e)
        mean = sum(result.vertex_coverage) / max(len(result.vertex_coverage), 1)
        metrics = {
            "nibble_coverage": round(result.report.coverage, 4),
            "gamma_effective": round(result.report.gamma_effective, 4),
            "cycles": sum(result.cycles_packed),
            "connections_failed": result.connections_failed,
            "mean_vertex_coverage": round(mean, 4),
            "min_vertex_coverage": round(min(result.vertex_coverage, default=1.0), 4),
        }
        return mean >= self.threshold, metrics

    def link_up(self) -> Tuple[bool, Dict[str, Any]]:
        linked = failed = 0
        links = [e for e in self.edge_cells["G_tilde"] if self._free(e)]
        link_host = EdgeSet.of(self.n, links)
        for i in range(self.t):
            q, p = self.q_paths[i], self.p_paths[i]
            if q and p:
                forest = self.forests[i]
                linker = PathLinker(
                    self.g, self.vertex_cells[i]["V_tilde"], set(self.colour_cells[i]["C_tilde"]),
                    link_host, self.used | self.reserved,
                )
                taken = set(forest.vertices()) | set(q) | set(p)
                w = linker.connect(q[-1], p[0], taken, set(forest.colours))
                if w is None:
                    failed += 1
                else:
                    self._grow(i, edge_key(q[-1], w))
                    self._grow(i, edge_key(w, p[0]))
                    linked += 1
        deficit = sum(max(self._target(i) - len(f.edges), 0) for i, f in enumerate(self.forests))

        leftover_vertices = [set(range(self.n)) - set(f.vertices()) for f in self.forests]
        leftover_colours = [
            set(range(self.n - 1)) - f.colours - self._forbidden_colours(i) for i, f in enumerate(self.forests)
        ]
        leftover_edges = [e for e in self.g.edges() if self._free(e)]
        xi_bound = ceil(sqrt(self.params.xi) * self.n)
        desk_bound = ceil(self.params.audit_gamma * self.n)
        at_xi = check_bounded(self.g, leftover_edges, leftover_vertices, leftover_colours, xi_bound)
        at_desk = check_bounded(self.g, leftover_edges, leftover_vertices, leftover_colours, desk_bound)
        metrics = {
            "linked": linked,
            "link_failures": failed,
            "edges_short_of_target": deficit,
            "bounded_at_xi": at_xi.bounded,
            "xi_bound": xi_bound,
            "bounded_at_audit": at_desk.bounded,
            "audit_bound": desk_bound,
            "violations": len(at_desk.violations),
        }
        return failed == 0 and at_desk.bounded, metrics

    def cover_edges(self) -> Tuple[bool, Dict[str, Any]]:
        leftover = [e for e in self.g.edges() if self._free(e)]
        self.rng.shuffle(leftover)
        order = list(range(self.t))
        covered = 0
        for e in leftover:
            c = self.g.colour_of(*e)
            self.rng.shuffle(order)
            for i in order:
                if len(self.forests[i].edges) >= self._target(i) or c in self._blocked_colours(i):
                    continue
                if self._grow(i, e):
                    covered += 1
                    break
        ratio = self._ratio(covered, len(leftover))
        return ratio >= self.threshold, {"leftover_edges": len(leftover), "covered": covered, "ratio": round(ratio, 4)}

    def cover_colours(self) -> Tuple[bool, Dict[str, Any]]:
        """Give every tree its missing colours, then attach the spine up to the F*_i edge count.

        Reservoir edges are lent out here. A colour-absorber tree keeps exactly
        s of its Y palette colours missing for step 9.
        """
        by_colour = self._by_colour([e for e in self.g.edges() if self._available(e, reservoir=True)])
        missing = covered = lent = 0
        for i, forest in enumerate(self.forests):
            target = self._target(i)
            palette_y = self._palette_y(i)
            quota = max(len(palette_y - forest.colours) - self.params.s, 0)
            wanted = set(range(self.n - 1)) - forest.colours - self._forbidden_colours(i)
            for c in sorted(wanted):
                if c in palette_y and quota == 0:
                    continue
                missing += 1
                if len(forest.edges) >= target:
                    continue
                for e in by_colour.get(c, []):
                    was_reserved = e in self.reserved
                    if self._grow(i, e, reservoir=True):
                        covered += 1
                        lent += was_reserved
                        quota -= c in palette_y
                        break

        before = sum(len(f.edges) for f in self.forests)
        breaks = [i for i in range(self.t) if not self._attach_spine(i, self._target(i))]
        ratio = self._ratio(covered, missing)
        metrics = {
            "missing_colours": missing,
            "covered": covered,
            "ratio": round(ratio, 4),
            "reservoir_lent": lent,
            "spine_edges": sum(len(f.edges) for f in self.forests) - before,
            "identity_breaks": len(breaks),
            "broken_trees": breaks[:10],
        }
        return ratio >= self.threshold and not breaks, metrics

    def absorb_vertices(self) -> Tuple[bool, Dict[str, Any]]:
        host = EdgeSet.of(self.n, [e for e in self.g.edges() if self._available(e, reservoir=True)])
        tasks: List[ColouredBipartite] = []
        owners: List[int] = []
        leftover = 0
        for i, forest in enumerate(self.forests):
            inside = forest.vertices()
            outside = sorted(set(range(self.n)) - set(inside))
            leftover += len(outside)
            size = min(len(inside), len(outside))
            if size == 0:
                continue
            colours = set(range(self.n - 1)) - forest.colours - self._blocked_colours(i)
            tasks.append(
                ColouredBipartite.from_host(
                    self.g, outside[:size], sorted(self.rng.sample(inside, size)), host, colours
                )
            )
            owners.append(i)
        if not tasks:
            return True, {"leftover_vertices": leftover, "absorbed": 0, "skipped": 0}
        result = greedy_disjoint_rainbow_pms(
            tasks, self.params.audit_gamma, next(self._seeds), self.n, budget_r=2, switch_budget=2000
        )
        absorbed = 0
        for step in result.steps:
            if step.status != "matched":
                continue
            i = owners[step.index]
            absorbed += sum(self._grow(i, edge_key(a, b), reservoir=True) for a, b in step.pairs.items())
        skipped = sum(1 for step in result.steps if step.status == "skipped")
        ratio = self._ratio(absorbed, leftover)
        metrics = {
            "leftover_vertices": leftover,
            "absorbed": absorbed,
            "skipped": skipped,
            "precondition_violations": len(result.precondition_violations),
            "ratio": round(ratio, 4),
        }
        return ratio >= self.threshold, metrics

    def _release(self, edges: List[Edge]) -> None:
        for e in edges:
            self.reserved.discard(e)

    def absorb_colours(self) -> Tuple[bool, Dict[str, Any]]:
        s = self.params.s
        absorbed = mismatched = refuted = conflicts = 0
        for i, absorber in sorted(self._colour_store.items()):
            self._release(list(absorber.slots.values()))
            forest = self.forests[i]
            leftover = [r for r in range(2 * s) if absorber.palette[r] not in forest.colours]
            if len(leftover) != s:
                mismatched += 1
                continue
            try:
                pairs = robust_match(absorber.graph, leftover).pairs
            except RefutationError:
                refuted += 1
                continue
            picked = [absorber.slots[(j, r)] for j, r in sorted(pairs.items())]
            conflicts += sum(not self._grow(i, e) for e in picked)
            absorbed += 1
        metrics = {"absorbed": absorbed, "mismatched": mismatched, "refuted": refuted, "forest_conflicts": conflicts}
        return mismatched == refuted == conflicts == 0, metrics

    def absorb_edges(self) -> Tuple[bool, Dict[str, Any]]:
        """Absorb d unused reservoir edges per colour; surplus ones are reported as stranded."""
        absorbed = mismatched = refuted = conflicts = stranded = 0
        for c, absorber in sorted(self._edge_store.items()):
            self._release(absorber.reservoir + absorber.buffer)
            d = absorber.graph.deficiency
            leftover = [r for r, e in enumerate(absorber.reservoir) if e not in self.used]
            if len(leftover) < d:
                mismatched += 1
                continue
            stranded += len(leftover) - d
            try:
                pairs = robust_match(absorber.graph, leftover[:d]).pairs
            except RefutationError:
                refuted += 1
                continue
            for x, r in sorted(pairs.items()):
                conflicts += not self._grow(absorber.trees[x], absorber.right_edge(r))
            absorbed += 1

        parts = [EdgeSet.of(self.n, f.edges) for f in self.forests]
        audit = verify_decomposition(self.g, parts)
        self.verified = audit.valid
        if audit.valid:
            self.isomorphic = self._isomorphic_to_target(parts)
        metrics = {
            "absorbed_colours": absorbed,
            "mismatched": mismatched,
            "refuted": refuted,
            "stranded_reservoir_edges": stranded,
            "forest_conflicts": conflicts,
            "decomposition_valid": audit.valid,
            "diagnostics": audit.diagnostics[:10],
            "isomorphic_to_target": self.isomorphic,
        }
        return audit.valid, metrics

    def _isomorphic_to_target(self, parts: List[EdgeSet]) -> Optional[bool]:
        try:
            target = canonical_form(build_T(self.n, self.params.r, self.params.b, self.params.absorber_size))
        except InvalidArgumentError:
            return None
        return all(canonical_form(TreeShape.from_edge_set(p)) == target for p in parts)


def _trivial_report(g: EdgeColouredKn, params: PipelineParams, seed: int) -> StrategyReport:
    audit = verify_decomposition(g, [EdgeSet.of(g.n, [(0, 1)])])
    steps = [
        StepReport(step=k, name=STEP_NAMES[k], status="trivial", metrics={"trees": 1})
        for k in sorted(STEP_NAMES)
    ]
    return StrategyReport(
        n=g.n,
        seed=seed,
        params=params.summary(),
        splits=[],
        steps=steps,
        decomposition_verified=audit.valid,
        isomorphic_to_target=audit.valid,
    )


def run_strategy(g: EdgeColouredKn, params: PipelineParams, seed: int = 0, force: bool = False) -> StrategyReport:
    """Run the ten steps on ``g`` and report each one; never raises for a failed step.

    Args:
        g: Coloured complete graph
        params: Parameters with ``params.n == g.n``
        seed: RNG seed for every split and component
        force: Run steps even when a step they depend on failed

    Raises:
        InvalidArgumentError: If ``params.n`` differs from ``g.n``
    """
    if params.n != g.n:
        raise InvalidArgumentError(
            message=f"Parameters are for n={params.n}, instance has n={g.n}",
            details={"params_n": params.n, "n": g.n},
        )
    if g.n == 2:
        return _trivial_report(g, params, seed)

    run = _Run(g, params, seed)
    run.split()
    bodies: Dict[int, Callable[[], Tuple[bool, Dict[str, Any]]]] = {
        1: run.edge_absorbers,
        2: run.colour_absorbers,
        3: run.vertex_absorbers,
        4: run.almost_spanning_paths,
        5: run.link_up,
        6: run.cover_edges,
        7: run.cover_colours,
        8: run.absorb_vertices,
        9: run.absorb_colours,
        10: run.absorb_edges,
    }
    steps: List[StepReport] = []
    broken: Set[int] = set()
    for k in sorted(bodies):
        name = STEP_NAMES[k]
        blocked = [d for d in DEPENDENCIES[k] if d in broken]
        if blocked and not force:
            broken.add(k)
            steps.append(
                StepReport(step=k, name=name, status="skipped", message=f"needs failed step(s) {blocked}")
            )
            continue
        bind_component(name)
        try:
            ok, metrics = bodies[k]()
            status: StepStatus = "passed" if ok else "failed"
            report = StepReport(step=k, name=name, status=status, metrics=metrics)
        except Exception as exc:
            err = wrap_unexpected(exc)
            report = StepReport(step=k, name=name, status="failed", error_type=err.error_type, message=err.message)
        if report.status == "failed":
            broken.add(k)
        logger.info("Strategy step finished", step=k, status=report.status, operation="run_strategy")
        steps.append(report)

    first = next((s.step for s in steps if s.status == "failed"), None)
    return StrategyReport(
        n=g.n,
        seed=seed,
        params=params.summary(),
        splits=run.split_audit,
        steps=steps,
        first_failure=first,
        decomposition_verified=run.verified,
        isomorphic_to_target=run.isomorphic,
    )


__all__ = [
    "STEP_NAMES",
    "DEPENDENCIES",
    "StepReport",
    "SplitAudit",
    "StrategyReport",
    "run_strategy",
]
