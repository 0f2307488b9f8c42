"""Integer max-flow (Dinic) with a residual-reachability min-cut certificate."""

from collections import deque
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from rainbow_decomp.utils.errors import InternalInconsistencyError


class Arc(BaseModel):
    """Directed arc with a non-negative integer capacity."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tail: int = Field(..., ge=0)
    head: int = Field(..., ge=0)
    capacity: int = Field(..., ge=0)


class FlowNetwork(BaseModel):
    """Capacitated digraph with designated source and sink."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    node_count: int = Field(..., ge=2)
    arcs: List[Arc] = Field(default_factory=list)
    source: int
    sink: int

    @model_validator(mode="after")
    def validate_structure(self) -> "FlowNetwork":
        if not (0 <= self.source < self.node_count and 0 <= self.sink < self.node_count):
            raise ValueError("source and sink must be nodes of the network")
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        for i, arc in enumerate(self.arcs):
            if arc.tail >= self.node_count or arc.head >= self.node_count:
                raise ValueError(f"arc {i} ({arc.tail}->{arc.head}) leaves the node range")
            if arc.head == self.source:
                raise ValueError(f"arc {i} enters the source")
            if arc.tail == self.sink:
                raise ValueError(f"arc {i} leaves the sink")
        return self


class FlowResult(BaseModel):
    """Maximum flow value, per-arc flow and the certifying cut."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    value: int
    arc_flows: List[int]
    source_side: List[int] = Field(..., description="Nodes reachable from the source in the residual graph")
    cut_capacity: int


def max_flow(net: FlowNetwork) -> FlowResult:
    """Dinic's algorithm: BFS level graph, then blocking flows by iterative DFS.

    Raises:
        InternalInconsistencyError: If the residual cut does not match the flow value
    """
    n = net.node_count
    head: List[int] = []
    cap: List[int] = []
    graph: List[List[int]] = [[] for _ in range(n)]
    for arc in net.arcs:
        graph[arc.tail].append(len(head))
        head.append(arc.head)
        cap.append(arc.capacity)
        graph[arc.head].append(len(head))
        head.append(arc.tail)
        cap.append(0)

    s, t = net.source, net.sink
    value = 0
    while True:
        level = _levels(graph, head, cap, s, n)
        if level[t] < 0:
            break
        it = [0] * n
        while True:
            pushed = _augment_once(graph, head, cap, level, it, s, t)
            if pushed == 0:
                break
            value += pushed

    flows = [net.arcs[i].capacity - cap[2 * i] for i in range(len(net.arcs))]
    reach = _levels(graph, head, cap, s, n)
    source_side = [v for v in range(n) if reach[v] >= 0]
    inside = set(source_side)
    cut_capacity = sum(
        arc.capacity for arc in net.arcs if arc.tail in inside and arc.head not in inside
    )
    if cut_capacity != value:
        raise InternalInconsistencyError(
            message=f"Flow value {value} differs from residual cut capacity {cut_capacity}",
            details={"value": value, "cut_capacity": cut_capacity},
        )
    return FlowResult(value=value, arc_flows=flows, source_side=source_side, cut_capacity=cut_capacity)


def _levels(graph: List[List[int]], head: List[int], cap: List[int], s: int, n: int) -> List[int]:
    level = [-1] * n
    level[s] = 0
    queue: deque = deque([s])
    while queue:
        u = queue.popleft()
        for e in graph[u]:
            v = head[e]
            if cap[e] > 0 and level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def _augment_once(
    graph: List[List[int]],
    head: List[int],
    cap: List[int],
    level: List[int],
    it: List[int],
    s: int,
    t: int,
) -> int:
    path: List[int] = []
    u = s
    while u != t:
        edges = graph[u]
        while it[u] < len(edges):
            e = edges[it[u]]
            v = head[e]
            if cap[e] > 0 and level[v] == level[u] + 1:
                path.append(e)
                u = v
                break
            it[u] += 1
        else:
            if u == s:
                return 0
            # Dead end: retire u from this phase and retreat one arc.
            level[u] = -1
            e = path.pop()
            u = head[e ^ 1]
            it[u] += 1
    bottleneck = min(cap[e] for e in path)
    for e in path:
        cap[e] -= bottleneck
        cap[e ^ 1] += bottleneck
    return bottleneck


def conservation_violations(net: FlowNetwork, flows: List[int]) -> List[int]:
    """Internal nodes whose inflow and outflow differ."""
    balance = [0] * net.node_count
    for arc, f in zip(net.arcs, flows):
        balance[arc.tail] -= f
        balance[arc.head] += f
    return [
        v for v in range(net.node_count)
        if v not in (net.source, net.sink) and balance[v] != 0
    ]


__all__ = ["Arc", "FlowNetwork", "FlowResult", "max_flow", "conservation_violations"]
