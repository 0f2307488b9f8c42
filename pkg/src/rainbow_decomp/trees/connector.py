"""Connectors over a uniform matching of labelled vertices."""

from typing import List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.models import Edge
from rainbow_decomp.trees.shape import TreeShape
from rainbow_decomp.utils.errors import InvalidArgumentError


class Connector(BaseModel):
    """For each hyperedge R = {u_1..u_k}: new vertices v_1..v_{k+1}, edges u_i v_i and v_{k+1} v_i."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    hyperedges: List[Tuple[int, ...]]
    new_vertices: List[Tuple[int, ...]] = Field(..., description="v_1..v_{k+1} per hyperedge")
    edges: List[Edge]
    vertex_count: int = Field(..., description="One more than the largest id used")

    def as_shape(self) -> TreeShape:
        return TreeShape.build(
            max(self.vertex_count, 1),
            self.edges,
            {"centres": [vs[-1] for vs in self.new_vertices]},
        )


def build_connector(hyperedges: Sequence[Sequence[int]]) -> Connector:
    """Build the connector; new ids start after the largest labelled vertex.

    Raises:
        InvalidArgumentError: If hyperedges overlap, repeat a vertex or differ in size
    """
    rows = [tuple(e) for e in hyperedges]
    seen: set = set()
    for idx, e in enumerate(rows):
        if len(set(e)) != len(e) or not e:
            raise InvalidArgumentError(message=f"hyperedge {idx} is empty or repeats a vertex")
        if seen & set(e):
            raise InvalidArgumentError(
                message=f"hyperedge {idx} overlaps an earlier one", details={"shared": sorted(seen & set(e))}
            )
        seen |= set(e)
    if len({len(e) for e in rows}) > 1:
        raise InvalidArgumentError(message="hyperedges must all have the same size")

    next_id = max(seen) + 1 if seen else 0
    edges: List[Edge] = []
    new_vertices: List[Tuple[int, ...]] = []
    for e in rows:
        k = len(e)
        vs = tuple(range(next_id, next_id + k + 1))
        next_id += k + 1
        for i, u in enumerate(e):
            edges.append((u, vs[i]))
            edges.append((vs[k], vs[i]))
        new_vertices.append(vs)
    return Connector(hyperedges=rows, new_vertices=new_vertices, edges=edges, vertex_count=next_id)


__all__ = ["Connector", "build_connector"]
