"""Maximum bipartite matching (Hopcroft-Karp) with a Kőnig cover certificate."""

from collections import deque
from typing import Dict, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from rainbow_decomp.utils.errors import InvalidArgumentError

UNMATCHED = -1


class MatchingResult(BaseModel):
    """Maximum matching plus a vertex cover of equal size."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    size: int
    pairs: Dict[int, int] = Field(default_factory=dict, description="left -> right")
    cover_left: List[int] = Field(default_factory=list)
    cover_right: List[int] = Field(default_factory=list)

    def is_certified(self) -> bool:
        return len(self.cover_left) + len(self.cover_right) == self.size

    def is_perfect_on_left(self, left_size: int) -> bool:
        return self.size == left_size


class HopcroftKarp:
    """Hopcroft-Karp over adjacency lists ``adj[u] = [v, ...]``.

    Phases alternate a BFS that layers the left side from the free vertices and
    an iterative DFS that extends the matching along vertex-disjoint shortest
    augmenting paths.
    """

    def __init__(self, left_size: int, right_size: int, adj: Sequence[Sequence[int]]):
        self.left_size = left_size
        self.right_size = right_size
        self.adj = adj
        self.match_left = [UNMATCHED] * left_size
        self.match_right = [UNMATCHED] * right_size
        self.dist = [0] * left_size

    def _bfs(self) -> bool:
        inf = self.left_size + 1
        queue: deque = deque()
        for u in range(self.left_size):
            if self.match_left[u] == UNMATCHED:
                self.dist[u] = 0
                queue.append(u)
            else:
                self.dist[u] = inf
        found = False
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                w = self.match_right[v]
                if w == UNMATCHED:
                    found = True
                elif self.dist[w] == inf:
                    self.dist[w] = self.dist[u] + 1
                    queue.append(w)
        return found

    def _augment(self, root: int) -> bool:
        inf = self.left_size + 1
        stack: List[Tuple[int, int]] = [(root, 0)]
        path: List[Tuple[int, int]] = []
        while stack:
            u, pos = stack[-1]
            adj_u = self.adj[u]
            advanced = False
            while pos < len(adj_u):
                v = adj_u[pos]
                pos += 1
                w = self.match_right[v]
                if w == UNMATCHED:
                    path.append((u, v))
                    for pu, pv in path:
                        self.match_left[pu] = pv
                        self.match_right[pv] = pu
                    return True
                if self.dist[w] == self.dist[u] + 1:
                    stack[-1] = (u, pos)
                    path.append((u, v))
                    stack.append((w, 0))
                    advanced = True
                    break
            if not advanced:
                self.dist[u] = inf
                stack.pop()
                if path:
                    path.pop()
        return False

    def run(self) -> int:
        size = 0
        while self._bfs():
            for u in range(self.left_size):
                if self.match_left[u] == UNMATCHED and self._augment(u):
                    size += 1
        return size

    def konig_cover(self) -> Tuple[List[int], List[int]]:
        """Kőnig cover from alternating reachability of the free left vertices.

        With Z the set reachable from free left vertices (left to right along
        non-matching edges, right to left along matching edges), the cover is
        (L minus Z) together with (R within Z).
        """
        left_seen, right_seen = self.alternating_reach()
        cover_left = [u for u in range(self.left_size) if not left_seen[u]]
        cover_right = [v for v in range(self.right_size) if right_seen[v]]
        return cover_left, cover_right

    def alternating_reach(self) -> Tuple[List[bool], List[bool]]:
        left_seen = [False] * self.left_size
        right_seen = [False] * self.right_size
        queue: deque = deque()
        for u in range(self.left_size):
            if self.match_left[u] == UNMATCHED:
                left_seen[u] = True
                queue.append(u)
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if right_seen[v] or self.match_left[u] == v:
                    continue
                right_seen[v] = True
                w = self.match_right[v]
                if w != UNMATCHED and not left_seen[w]:
                    left_seen[w] = True
                    queue.append(w)
        return left_seen, right_seen


def _validate_adjacency(left_size: int, right_size: int, adjacency: Sequence[Sequence[int]]) -> None:
    if left_size < 0 or right_size < 0:
        raise InvalidArgumentError(message="Part sizes must be non-negative")
    if len(adjacency) != left_size:
        raise InvalidArgumentError(
            message=f"Adjacency has {len(adjacency)} rows for {left_size} left vertices"
        )
    for u, row in enumerate(adjacency):
        for v in row:
            if not 0 <= v < right_size:
                raise InvalidArgumentError(
                    message=f"Neighbour {v} of left vertex {u} outside [0, {right_size - 1}]",
                    details={"left": u, "right": v},
                )


def max_matching_size(left_size: int, right_size: int, adjacency: Sequence[Sequence[int]]) -> int:
    """Matching size only; the unvalidated fast path used inside searches."""
    return HopcroftKarp(left_size, right_size, adjacency).run()


def bipartite_max_matching(
    left_size: int, right_size: int, adjacency: Sequence[Sequence[int]]
) -> MatchingResult:
    """Maximum matching certified by a Kőnig vertex cover of the same size.

    Args:
        left_size: Number of left vertices
        right_size: Number of right vertices
        adjacency: ``adjacency[u]`` lists the right neighbours of left vertex u

    Returns:
        MatchingResult with pairs and cover

    Raises:
        InvalidArgumentError: If adjacency refers to vertices out of range
    """
    _validate_adjacency(left_size, right_size, adjacency)
    hk = HopcroftKarp(left_size, right_size, adjacency)
    size = hk.run()
    cover_left, cover_right = hk.konig_cover()
    pairs = {u: v for u, v in enumerate(hk.match_left) if v != UNMATCHED}
    return MatchingResult(size=size, pairs=pairs, cover_left=cover_left, cover_right=cover_right)


__all__ = [
    "UNMATCHED",
    "MatchingResult",
    "HopcroftKarp",
    "max_matching_size",
    "bipartite_max_matching",
]
