"""The target trees and the absorber chain gadget.

``build_T(n, r, b, k)``: a spine v_0..v_ℓ; 2(k−1) pendant paths of length 2
at each v_{5j} (1 ≤ j < r) and k−1 at each of v_0 and v_{5r}; b new vertices
matched to v_{ℓ−b+1}..v_ℓ. Here ℓ = n − 4(k−1)r − b − 1, and k = 256 gives
1020r path vertices and maximum degree 512. Vertices are numbered spine
first, then path vertices, then B.

``build_T_delta3(n, r, b, depth)``: the maximum-degree-3 variant. With
L = 2^depth it chains r matchings of L edges; the head ends of one matching
and the tail ends of the next are joined by two binary trees whose roots are
linked by a path of length 2, every edge subdivided once. The tail ends of
the first matching hang from a subdivided binary tree with a new root z_0,
the head ends of the last from a subdivided binary tree rooted at the spine
vertex v_0. Exactly one edge of each matching (the first) belongs to the
tree; by symmetry of the binary trees the shape does not depend on which.
"""

from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.models import Edge
from rainbow_decomp.trees.shape import TreeShape
from rainbow_decomp.utils.errors import InvalidArgumentError

DEFAULT_ABSORBER_SIZE = 256
DEFAULT_BINARY_DEPTH = 8


def spine_length(n: int, r: int, b: int, absorber_size: int = DEFAULT_ABSORBER_SIZE) -> int:
    """ℓ = n − 4(k−1)r − b − 1."""
    return n - 4 * (absorber_size - 1) * r - b - 1


def build_T(n: int, r: int, b: int, absorber_size: int = DEFAULT_ABSORBER_SIZE) -> TreeShape:
    """The target tree with ``r`` absorber attachment points and ``b`` pendant B-vertices.

    Raises:
        InvalidArgumentError: Unless r ≥ 1, b ≥ 1, k ≥ 2, ℓ > r + b and 5r < ℓ − b + 1
    """
    k = absorber_size
    ell = spine_length(n, r, b, k)
    if r < 1 or b < 1 or k < 2:
        raise InvalidArgumentError(
            message=f"Need r >= 1, b >= 1 and absorber size >= 2 (got r={r}, b={b}, k={k})",
            details={"ell": ell},
        )
    if ell <= r + b or 5 * r >= ell - b + 1:
        raise InvalidArgumentError(
            message=f"Infeasible parameters: l = {ell} needs l > r + b and 5r < l - b + 1",
            details={"n": n, "r": r, "b": b, "absorber_size": k, "ell": ell},
        )

    edges: List[Edge] = [(i, i + 1) for i in range(ell)]
    next_id = ell + 1
    attachments = [5 * j for j in range(r + 1)]
    for j, v in enumerate(attachments):
        count = k - 1 if j in (0, r) else 2 * (k - 1)
        for _ in range(count):
            edges.append((v, next_id))
            edges.append((next_id, next_id + 1))
            next_id += 2
    b_set = list(range(next_id, next_id + b))
    for offset, w in enumerate(b_set):
        edges.append((ell - b + 1 + offset, w))

    return TreeShape.build(
        n,
        edges,
        {"spine": list(range(ell + 1)), "attachments": attachments, "B": b_set},
    )


def delta3_connector_vertices(leaves: int) -> int:
    """New vertices of one connector between a head set and a tail set of ``leaves`` each: 6L − 3."""
    return 6 * leaves - 3


def delta3_start_vertices(leaves: int) -> int:
    """New vertices of the start gadget (root z_0 included): 3L − 3."""
    return 3 * leaves - 3


def delta3_end_vertices(leaves: int) -> int:
    """New vertices of the end gadget (its root is the spine vertex v_0): 3L − 4."""
    return 3 * leaves - 4


def delta3_gadget_vertices(r: int, depth: int = DEFAULT_BINARY_DEPTH) -> int:
    """Vertices outside the spine and B: 2Lr + (r−1)(6L−3) + 6L − 7."""
    leaves = 2**depth
    return (
        2 * leaves * r
        + (r - 1) * delta3_connector_vertices(leaves)
        + delta3_start_vertices(leaves)
        + delta3_end_vertices(leaves)
    )


def delta3_spine_length(n: int, r: int, b: int, depth: int = DEFAULT_BINARY_DEPTH) -> int:
    return n - b - 1 - delta3_gadget_vertices(r, depth)


class _Builder:
    def __init__(self, first_id: int):
        self.next_id = first_id
        self.edges: List[Edge] = []

    def new(self) -> int:
        v = self.next_id
        self.next_id += 1
        return v

    def subdivided(self, a: int, b: int) -> None:
        s = self.new()
        self.edges.append((a, s))
        self.edges.append((s, b))

    def binary_tree(self, leaves: Sequence[int], root: Optional[int] = None) -> int:
        """Subdivided binary tree over ``leaves`` (a power of two); the top node is ``root`` if given."""
        level = list(leaves)
        while len(level) > 1:
            parents = []
            last = len(level) == 2
            for x, y in zip(level[0::2], level[1::2]):
                p = root if (last and root is not None) else self.new()
                self.subdivided(p, x)
                self.subdivided(p, y)
                parents.append(p)
            level = parents
        return level[0]


def build_T_delta3(n: int, r: int, b: int, depth: int = DEFAULT_BINARY_DEPTH) -> TreeShape:
    """Maximum-degree-3 target tree; see the module docstring for the layout.

    Raises:
        InvalidArgumentError: Unless r ≥ 1, b ≥ 1, depth ≥ 1 and the spine length ℓ ≥ max(b, 1)
    """
    if r < 1 or b < 1 or depth < 1:
        raise InvalidArgumentError(message=f"Need r >= 1, b >= 1, depth >= 1 (got {r}, {b}, {depth})")
    leaves = 2**depth
    ell = delta3_spine_length(n, r, b, depth)
    if ell < max(b, 1):
        raise InvalidArgumentError(
            message=f"Infeasible parameters: spine length {ell} must be at least max(b, 1)",
            details={"n": n, "r": r, "b": b, "depth": depth, "ell": ell,
                     "gadget_vertices": delta3_gadget_vertices(r, depth)},
        )

    builder = _Builder(ell + 1)
    builder.edges.extend((i, i + 1) for i in range(ell))
    tails: List[List[int]] = []
    heads: List[List[int]] = []
    for _ in range(r):
        tails.append([builder.new() for _ in range(leaves)])
        heads.append([builder.new() for _ in range(leaves)])

    z0 = builder.binary_tree(tails[0])
    for j in range(r - 1):
        top = builder.binary_tree(heads[j])
        bottom = builder.binary_tree(tails[j + 1])
        middle = builder.new()
        builder.subdivided(top, middle)
        builder.subdivided(middle, bottom)
    builder.binary_tree(heads[r - 1], root=0)

    chosen = [(tails[j][0], heads[j][0]) for j in range(r)]
    builder.edges.extend(chosen)
    b_set = [builder.new() for _ in range(b)]
    for offset, w in enumerate(b_set):
        builder.edges.append((ell - b + 1 + offset, w))

    return TreeShape.build(
        n,
        builder.edges,
        {
            "spine": list(range(ell + 1)),
            "B": b_set,
            "start_root": [z0],
            "chosen_edges": [v for e in chosen for v in e],
        },
    )


class AbsorberChain(BaseModel):
    """Series of absorber blocks around a spine w_0..w_p.

    Block j has half-paths w_j–x–a and b–y–w_{j+1} around each slot (a, b)
    of its matching. Adding exactly one slot edge per block yields a tree
    whose shape does not depend on the choices.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    vertex_count: int
    edges: List[Edge] = Field(..., description="Forest edges, slot edges excluded")
    spine: List[int]
    slots: List[List[Tuple[int, int]]] = Field(..., description="Per block, the (a, b) matching slots")

    def complete(self, choice: Sequence[int]) -> TreeShape:
        if len(choice) != len(self.slots):
            raise InvalidArgumentError(message=f"Need one slot per block ({len(self.slots)}), got {len(choice)}")
        extra = []
        for j, i in enumerate(choice):
            if not 0 <= i < len(self.slots[j]):
                raise InvalidArgumentError(message=f"Block {j} has no slot {i}")
            extra.append(self.slots[j][i])
        return TreeShape.build(self.vertex_count, self.edges + extra, {"spine": self.spine})


def build_absorber_chain(block_sizes: Sequence[int]) -> AbsorberChain:
    if not block_sizes or any(size < 1 for size in block_sizes):
        raise InvalidArgumentError(message=f"Block sizes must be positive, got {list(block_sizes)}")
    p = len(block_sizes)
    spine = list(range(p + 1))
    next_id = p + 1
    edges: List[Edge] = []
    slots: List[List[Tuple[int, int]]] = []
    for j, size in enumerate(block_sizes):
        block = []
        for _ in range(size):
            x, a, b, y = next_id, next_id + 1, next_id + 2, next_id + 3
            next_id += 4
            edges += [(spine[j], x), (x, a), (b, y), (y, spine[j + 1])]
            block.append((a, b))
        slots.append(block)
    return AbsorberChain(vertex_count=next_id, edges=edges, spine=spine, slots=slots)


def slot_map(chain: AbsorberChain) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """(a, b) slot -> (block, position)."""
    return {slot: (j, i) for j, block in enumerate(chain.slots) for i, slot in enumerate(block)}


__all__ = [
    "DEFAULT_ABSORBER_SIZE",
    "DEFAULT_BINARY_DEPTH",
    "spine_length",
    "build_T",
    "delta3_connector_vertices",
    "delta3_start_vertices",
    "delta3_end_vertices",
    "delta3_gadget_vertices",
    "delta3_spine_length",
    "build_T_delta3",
    "AbsorberChain",
    "build_absorber_chain",
    "slot_map",
]
