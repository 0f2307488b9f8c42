"""Labelled tree (and forest) shapes with parent-array JSON."""

from collections import deque
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.models import Edge, EdgeSet, edge_key
from rainbow_decomp.utils.errors import InvalidArgumentError, InvalidInstanceError, from_pydantic_error
from rainbow_decomp.utils.serialization import expect_mapping, read_json, write_json


class TreeShape(BaseModel):
    """Graph on ``range(vertex_count)`` with named vertex labels.

    Only structural validity (ranges, no loops, no repeated edges) is enforced
    at construction, so forests and partial gadgets share the type;
    :meth:`is_tree` tells whether the shape is a spanning tree.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    vertex_count: int = Field(..., ge=1)
    edges: Tuple[Edge, ...] = Field(default=())
    labels: Dict[str, Tuple[int, ...]] = Field(default_factory=dict)

    @field_validator("edges", mode="before")
    @classmethod
    def normalize_edges(cls, v: Any) -> Any:
        if isinstance(v, (list, tuple)):
            return tuple(sorted(edge_key(a, b) for a, b in v))
        return v

    @model_validator(mode="after")
    def validate_structure(self) -> "TreeShape":
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("repeated edge")
        for a, b in self.edges:
            if a < 0 or b >= self.vertex_count:
                raise ValueError(f"edge ({a},{b}) outside [0, {self.vertex_count - 1}]")
        for name, members in self.labels.items():
            if any(not 0 <= v < self.vertex_count for v in members):
                raise ValueError(f"label '{name}' names a vertex outside the shape")
        return self

    @classmethod
    def build(
        cls,
        vertex_count: int,
        edges: Sequence[Edge],
        labels: Union[Dict[str, Sequence[int]], None] = None,
    ) -> "TreeShape":
        try:
            return cls(
                vertex_count=vertex_count,
                edges=list(edges),
                labels={k: tuple(v) for k, v in (labels or {}).items()},
            )
        except PydanticValidationError as e:
            raise from_pydantic_error(e, "Invalid tree shape", parameters={"vertex_count": vertex_count})

    @classmethod
    def from_edge_set(cls, part: EdgeSet) -> "TreeShape":
        return cls.build(part.n, part.sorted_edges())

    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def degrees(self) -> List[int]:
        degrees = [0] * self.vertex_count
        for a, b in self.edges:
            degrees[a] += 1
            degrees[b] += 1
        return degrees

    def max_degree(self) -> int:
        return max(self.degrees())

    def is_tree(self) -> bool:
        if len(self.edges) != self.vertex_count - 1:
            return False
        adj = self.adjacency()
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.vertex_count

    def label(self, name: str) -> Tuple[int, ...]:
        return self.labels.get(name, ())

    def relabel(self, perm: Sequence[int]) -> "TreeShape":
        """Image under the vertex bijection ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.vertex_count)):
            raise InvalidArgumentError(message="relabel needs a permutation of the vertices")
        return TreeShape.build(
            self.vertex_count,
            [(perm[a], perm[b]) for a, b in self.edges],
            {k: [perm[v] for v in members] for k, members in self.labels.items()},
        )

    def parents(self) -> List[int]:
        """Parent array of the BFS tree rooted at 0 (root has parent -1)."""
        if not self.is_tree():
            raise InvalidArgumentError(message="Parent arrays exist only for trees")
        adj = self.adjacency()
        parent = [-1] * self.vertex_count
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in seen:
                    seen.add(w)
                    parent[w] = u
                    queue.append(w)
        return parent


def tree_to_json(t: TreeShape) -> Dict[str, Any]:
    return {"parents": t.parents(), "labels": {k: list(v) for k, v in t.labels.items()}}


def tree_from_json(data: Any, source: str = "<memory>") -> TreeShape:
    """Parse ``{"parents": [...], "labels": {...}}``; vertex 0 is the root."""
    data = expect_mapping(data, source)
    parents = data.get("parents")
    if not isinstance(parents, list) or not parents or parents[0] != -1:
        raise InvalidInstanceError(message=f"{source}: 'parents' must be a list starting with -1")
    edges = []
    for v, p in enumerate(parents[1:], start=1):
        if not isinstance(p, int) or not 0 <= p < len(parents) or p == v:
            raise InvalidInstanceError(message=f"{source}: parents[{v}] = {p!r} is not a vertex")
        edges.append((p, v))
    labels = data.get("labels", {})
    if not isinstance(labels, dict):
        raise InvalidInstanceError(message=f"{source}: 'labels' must be an object")
    try:
        shape = TreeShape.build(len(parents), edges, labels)
    except InvalidArgumentError as e:
        raise InvalidInstanceError(message=f"{source}: {e.message}", details=e.details)
    if not shape.is_tree():
        raise InvalidInstanceError(message=f"{source}: parent array does not describe a tree")
    return shape


def load_tree(path: Union[str, Path]) -> TreeShape:
    return tree_from_json(read_json(path), source=str(path))


def dump_tree(t: TreeShape, path: Union[str, Path]) -> None:
    write_json(path, tree_to_json(t))


__all__ = ["TreeShape", "tree_to_json", "tree_from_json", "load_tree", "dump_tree"]
