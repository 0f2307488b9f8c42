"""Toy-scale edge and colour absorbers with exhaustive property checks.

Both demos embed the forest of an absorber chain rainbow into a circle
factorization and hang the chain's matching slots on real edges of K_n.

Edge absorber: every tree i gets, for each absorbed colour c, a
monochromatic matching M_{i,c}. The matchings of colour c are read off a
verified RMBG(3m, 2m, 2m) whose X side are the trees, Y the reservoir edges and
Z the buffer edges of colour c. Any one edge per matching completes the
forest to a rainbow tree of a fixed shape, and for every choice E* of
leftover reservoir edges the robust matching hands each tree one edge of
E* ∪ Z.

Colour absorber: a single tree with 3s rainbow matchings M′_j whose colours
are the RMBG(3s, 2s, 2s) neighbourhoods of j over the palette C′_1 ∪ C′_2.
For every C* ⊆ C′_1 of size s the robust matching picks one edge per matching
so that the picked edges are exactly (C* ∪ C′_2)-rainbow.
"""

import random
from itertools import combinations, product
from typing import Dict, List, Literal, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.core.factorization import generate_circle_factorization
from rainbow_decomp.core.predicates import colours_of, is_rainbow
from rainbow_decomp.embed.greedy import EmbeddingPattern, build_task, embed_with_retries
from rainbow_decomp.models import Edge, EdgeColouredKn
from rainbow_decomp.rmbg.graph import Rmbg
from rainbow_decomp.rmbg.robust import robust_match, search_rmbg_sized
from rainbow_decomp.trees.canonical import canonical_form
from rainbow_decomp.trees.gadgets import AbsorberChain, build_absorber_chain
from rainbow_decomp.trees.shape import TreeShape
from rainbow_decomp.utils.errors import InvalidArgumentError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)

MAX_ABSORBED_COLOURS = 6
MAX_MATCHING_SIZE = 4
MAX_COLOUR_SCALE = 3


class AbsorberMatching(BaseModel):
    """One absorbing matching of one tree, in host edges."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tree: int
    block: int
    colour: Optional[int] = Field(None, description="The colour of a monochromatic matching")
    edges: List[Edge]


class ColourPool(BaseModel):
    """Reservoir (Y) and buffer (Z) edges of one absorbed colour."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    colour: int
    reservoir: List[Edge]
    buffer: List[Edge]


class AbsorberDemo(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["edge", "colour"]
    n: int
    seed: int
    forests: List[List[Edge]] = Field(..., description="Host edges of each forest F̃_i")
    matchings: List[AbsorberMatching]
    pools: List[ColourPool] = Field(default_factory=list)
    reservoir_colours: List[int] = Field(default_factory=list, description="C′_1")
    buffer_colours: List[int] = Field(default_factory=list, description="C′_2")
    canonical_form: str
    completions_checked: int
    absorptions_checked: int
    failures: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _demo_order(vertices: int, colours: int) -> int:
    return 2 * max(vertices, colours + 1)


def _disjoint_edges(
    g: EdgeColouredKn, colour: int, count: int, taken: Set[int], rng: random.Random
) -> List[Edge]:
    pool = list(g.colour_class(colour))
    rng.shuffle(pool)
    chosen: List[Edge] = []
    for u, v in pool:
        if len(chosen) == count:
            break
        if u not in taken and v not in taken:
            chosen.append((u, v))
            taken.update((u, v))
    if len(chosen) < count:
        raise InvalidArgumentError(
            message=f"Colour {colour} has fewer than {count} edges avoiding the used vertices",
            details={"colour": colour, "requested": count},
        )
    return chosen


def _roots(chain: AbsorberChain, slot_edges: Dict[Tuple[int, int], Edge]) -> Dict[int, int]:
    roots: Dict[int, int] = {}
    for j, block in enumerate(chain.slots):
        for k, (a, b) in enumerate(block):
            u, v = slot_edges[(j, k)]
            roots[a] = u
            roots[b] = v
    return roots


def _completion(
    g: EdgeColouredKn, forest: Sequence[Edge], extra: Sequence[Edge], expected_colours: Set[int]
) -> Tuple[Optional[str], List[str]]:
    edges = list(forest) + list(extra)
    vertices = sorted({v for e in edges for v in e})
    index = {v: k for k, v in enumerate(vertices)}
    failures: List[str] = []
    if not is_rainbow(g, edges):
        failures.append(f"completion with {sorted(extra)} is not rainbow")
    if set(colours_of(g, edges)) != expected_colours:
        failures.append(f"completion with {sorted(extra)} has the wrong colour set")
    shape = TreeShape.build(len(vertices), [(index[u], index[v]) for u, v in edges])
    if not shape.is_tree():
        failures.append(f"completion with {sorted(extra)} is not a tree")
        return None, failures
    return canonical_form(shape), failures


def build_edge_absorber_demo(
    blocks: int = 3, matching_size: int = 4, seed: int = 0, m: int = 1
) -> AbsorberDemo:
    """Edge absorbers for ``blocks`` colours over 3m trees, checked exhaustively.

    Every one of the ``matching_size ** blocks`` completions of every tree is
    audited, then every admissible E* of every colour is absorbed with
    :func:`robust_match` and the resulting partition of E* ∪ Z is audited.

    Raises:
        InvalidArgumentError: Outside the toy scale
        SearchFailedError: If no RMBG of the needed shape is found
    """
    if not 1 <= blocks <= MAX_ABSORBED_COLOURS or not 1 <= matching_size <= MAX_MATCHING_SIZE:
        raise InvalidArgumentError(
            message=(
                f"Toy scale needs 1..{MAX_ABSORBED_COLOURS} colours and matchings of size "
                f"1..{MAX_MATCHING_SIZE}, got {blocks} and {matching_size}"
            ),
            details={"blocks": blocks, "matching_size": matching_size},
        )
    if m not in (1, 2) or matching_size > 4 * m:
        raise InvalidArgumentError(
            message=f"m must be 1 or 2 with matching size at most 4m, got m={m}",
            details={"m": m, "matching_size": matching_size},
        )
    trees = 3 * m
    chain = build_absorber_chain([matching_size] * blocks)
    pool_vertices = 8 * m * blocks
    n = _demo_order(pool_vertices + chain.vertex_count, blocks + len(chain.edges))
    g = generate_circle_factorization(n)
    rng = random.Random(seed)
    absorbed = sorted(rng.sample(range(n - 1), blocks))

    taken: Set[int] = set()
    graphs: List[Rmbg] = []
    pools: List[ColourPool] = []
    for j, c in enumerate(absorbed):
        h = search_rmbg_sized(
            trees, 2 * m, 2 * m, max(matching_size, trees), seed + j, x_degree=matching_size
        )
        right = _disjoint_edges(g, c, 4 * m, taken, rng)
        graphs.append(h)
        pools.append(ColourPool(colour=c, reservoir=right[: 2 * m], buffer=right[2 * m :]))

    def right_edge(j: int, r: int) -> Edge:
        pool = pools[j]
        return pool.reservoir[r] if r < 2 * m else pool.buffer[r - 2 * m]

    allowed = tuple(c for c in range(n - 1) if c not in set(absorbed))
    targets = tuple(v for v in range(n) if v not in taken)
    patterns: List[EmbeddingPattern] = []
    matchings: List[AbsorberMatching] = []
    for i in range(trees):
        slot_edges = {
            (j, k): right_edge(j, r) for j, h in enumerate(graphs) for k, r in enumerate(h.adjacency[i])
        }
        for j, c in enumerate(absorbed):
            matchings.append(
                AbsorberMatching(
                    tree=i, block=j, colour=c, edges=[slot_edges[(j, k)] for k in range(matching_size)]
                )
            )
        patterns.append(
            EmbeddingPattern(
                vertex_count=chain.vertex_count,
                edges=chain.edges,
                roots=_roots(chain, slot_edges),
                target_vertices=targets,
                colours=allowed,
            )
        )
    embedded = embed_with_retries(build_task(g, patterns, gamma=1.0), seed)
    forests = embedded.edges

    failures: List[str] = []
    for am in matchings:
        if len({g.colour_of(*e) for e in am.edges}) != 1:
            failures.append(f"matching of tree {am.tree} block {am.block} is not monochromatic")
        if set(am.edges) & set(forests[am.tree]):
            failures.append(f"matching of tree {am.tree} block {am.block} meets its forest")

    forms: Set[str] = set()
    completions = 0
    for i in range(trees):
        blocks_of_i = [am.edges for am in matchings if am.tree == i]
        expected = set(colours_of(g, forests[i])) | set(absorbed)
        for choice in product(*blocks_of_i):
            form, found = _completion(g, forests[i], choice, expected)
            failures += [f"tree {i}: {f}" for f in found]
            if form is not None:
                forms.add(form)
            completions += 1
    reference = canonical_form(chain.complete([0] * blocks))
    if forms != {reference}:
        failures.append(f"completions realize {len(forms)} shapes other than the chain shape")

    absorptions = 0
    per_colour: List[Dict[Tuple[int, ...], Dict[int, Edge]]] = []
    for j, h in enumerate(graphs):
        table: Dict[Tuple[int, ...], Dict[int, Edge]] = {}
        for y_prime in combinations(range(2 * m), m):
            pairs = robust_match(h, y_prime).pairs
            table[y_prime] = {i: right_edge(j, r) for i, r in pairs.items()}
        per_colour.append(table)
    for combo in product(*(sorted(t) for t in per_colour)):
        absorptions += 1
        assigned: List[Edge] = []
        target: List[Edge] = []
        for j, y_prime in enumerate(combo):
            labelling = per_colour[j][y_prime]
            for i, e in labelling.items():
                if e not in matchings[i * blocks + j].edges:
                    failures.append(f"E*={combo}: edge {e} is not in M of tree {i}, colour {absorbed[j]}")
            assigned += labelling.values()
            target += [pools[j].reservoir[r] for r in y_prime] + pools[j].buffer
        if sorted(assigned) != sorted(target) or len(set(assigned)) != len(assigned):
            failures.append(f"E*={combo}: labelling is not a bijection onto E* ∪ Z")

    logger.info(
        "Edge absorber demo audited",
        n=n,
        trees=trees,
        blocks=blocks,
        completions=completions,
        absorptions=absorptions,
        failures=len(failures),
        operation="build_edge_absorber_demo",
    )
    return AbsorberDemo(
        kind="edge",
        n=n,
        seed=seed,
        forests=forests,
        matchings=matchings,
        pools=pools,
        canonical_form=reference,
        completions_checked=completions,
        absorptions_checked=absorptions,
        failures=failures,
    )


def build_colour_absorber_demo(s: int = 1, seed: int = 0) -> AbsorberDemo:
    """Colour absorber over one tree, absorbing every C* ⊆ C′_1 of size ``s``.

    Raises:
        InvalidArgumentError: Outside the toy scale
        SearchFailedError: If no RMBG(3s, 2s, 2s) of maximum degree 4 is found
    """
    if not 1 <= s <= MAX_COLOUR_SCALE:
        raise InvalidArgumentError(
            message=f"Toy scale needs 1 <= s <= {MAX_COLOUR_SCALE}, got {s}", details={"s": s}
        )
    h = search_rmbg_sized(3 * s, 2 * s, 2 * s, MAX_MATCHING_SIZE, seed)
    chain = build_absorber_chain(h.x_degrees())
    slot_count = h.edge_count
    n = _demo_order(2 * slot_count + chain.vertex_count, 4 * s + len(chain.edges))
    g = generate_circle_factorization(n)
    rng = random.Random(seed)
    palette = sorted(rng.sample(range(n - 1), 4 * s))
    rng.shuffle(palette)
    reservoir, buffer = palette[: 2 * s], palette[2 * s :]

    taken: Set[int] = set()
    slot_edges: Dict[Tuple[int, int], Edge] = {}
    for j, row in enumerate(h.adjacency):
        for k, r in enumerate(row):
            slot_edges[(j, k)] = _disjoint_edges(g, palette[r], 1, taken, rng)[0]
    matchings = [
        AbsorberMatching(tree=0, block=j, edges=[slot_edges[(j, k)] for k in range(len(row))])
        for j, row in enumerate(h.adjacency)
    ]
    pattern = EmbeddingPattern(
        vertex_count=chain.vertex_count,
        edges=chain.edges,
        roots=_roots(chain, slot_edges),
        target_vertices=tuple(v for v in range(n) if v not in taken),
        colours=tuple(c for c in range(n - 1) if c not in set(palette)),
    )
    forest = embed_with_retries(build_task(g, [pattern], gamma=1.0), seed).edges[0]

    failures: List[str] = []
    for am in matchings:
        if not is_rainbow(g, am.edges):
            failures.append(f"matching {am.block} is not rainbow")
    if not is_rainbow(g, forest):
        failures.append("forest is not rainbow")

    reference = canonical_form(chain.complete([0] * len(chain.slots)))
    forms: Set[str] = set()
    subsets = 0
    for c_star in combinations(sorted(reservoir), s):
        subsets += 1
        y_prime = [reservoir.index(c) for c in c_star]
        pairs = robust_match(h, y_prime).pairs
        picked = [slot_edges[(j, h.adjacency[j].index(r))] for j, r in sorted(pairs.items())]
        wanted = set(c_star) | set(buffer)
        if len(picked) != len(matchings):
            failures.append(f"C*={list(c_star)}: not one edge per matching")
        if not is_rainbow(g, picked) or set(colours_of(g, picked)) != wanted:
            failures.append(f"C*={list(c_star)}: picked edges are not (C* ∪ C′_2)-rainbow")
        form, found = _completion(g, forest, picked, set(colours_of(g, forest)) | wanted)
        failures += [f"C*={list(c_star)}: {f}" for f in found]
        if form is not None:
            forms.add(form)
    if forms != {reference}:
        failures.append(f"absorbed trees realize {len(forms)} shapes other than the chain shape")

    logger.info(
        "Colour absorber demo audited",
        n=n,
        s=s,
        subsets=subsets,
        failures=len(failures),
        operation="build_colour_absorber_demo",
    )
    return AbsorberDemo(
        kind="colour",
        n=n,
        seed=seed,
        forests=[forest],
        matchings=matchings,
        reservoir_colours=sorted(reservoir),
        buffer_colours=sorted(buffer),
        canonical_form=reference,
        completions_checked=subsets,
        absorptions_checked=subsets,
        failures=failures,
    )


def build_absorber_demo(kind: str, scale: int, seed: int = 0) -> AbsorberDemo:
    """``edge``: three colours with matchings of size ``scale``; ``colour``: s = ``scale``."""
    if kind == "edge":
        return build_edge_absorber_demo(blocks=3, matching_size=scale, seed=seed)
    if kind == "colour":
        return build_colour_absorber_demo(s=scale, seed=seed)
    raise InvalidArgumentError(message=f"Unknown absorber kind '{kind}'", details={"kind": kind})


__all__ = [
    "MAX_ABSORBED_COLOURS",
    "MAX_MATCHING_SIZE",
    "MAX_COLOUR_SCALE",
    "AbsorberMatching",
    "ColourPool",
    "AbsorberDemo",
    "build_edge_absorber_demo",
    "build_colour_absorber_demo",
    "build_absorber_demo",
]
