"""Tree isomorphism through AHU canonical strings rooted at the centroid."""

from collections import deque
from typing import List

from rainbow_decomp.trees.shape import TreeShape
from rainbow_decomp.utils.errors import InvalidArgumentError


def _bfs(adj: List[List[int]], root: int) -> tuple:
    parent = [-1] * len(adj)
    order = [root]
    seen = [False] * len(adj)
    seen[root] = True
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                order.append(w)
                queue.append(w)
    return order, parent


def centroids(t: TreeShape) -> List[int]:
    """The one or two vertices minimizing the largest component left after deletion."""
    adj = t.adjacency()
    n = t.vertex_count
    order, parent = _bfs(adj, 0)
    size = [1] * n
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    heaviest = []
    for v in range(n):
        largest = n - size[v]
        for w in adj[v]:
            if w != parent[v]:
                largest = max(largest, size[w])
        heaviest.append(largest)
    best = min(heaviest)
    return [v for v in range(n) if heaviest[v] == best]


def _rooted_code(adj: List[List[int]], root: int) -> str:
    order, parent = _bfs(adj, root)
    children: List[List[str]] = [[] for _ in adj]
    code = [""] * len(adj)
    for v in reversed(order):
        code[v] = "(" + "".join(sorted(children[v])) + ")"
        if parent[v] >= 0:
            children[parent[v]].append(code[v])
    return code[root]


def canonical_form(t: TreeShape) -> str:
    """AHU string at the centroid; the smaller of the two strings for a bicentroid.

    Raises:
        InvalidArgumentError: If ``t`` is not a tree
    """
    if not t.is_tree():
        raise InvalidArgumentError(
            message=f"Canonical forms need a tree ({t.vertex_count} vertices, {len(t.edges)} edges)"
        )
    adj = t.adjacency()
    return min(_rooted_code(adj, c) for c in centroids(t))


def tree_isomorphic(t1: TreeShape, t2: TreeShape) -> bool:
    """Isomorphism test for trees; raises InvalidArgumentError on non-tree input."""
    f1 = canonical_form(t1)
    f2 = canonical_form(t2)
    return t1.vertex_count == t2.vertex_count and f1 == f2


__all__ = ["centroids", "canonical_form", "tree_isomorphic"]
