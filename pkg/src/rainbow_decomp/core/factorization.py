"""Generation and verification of 1-factorizations of K_n."""

import random
from collections import Counter
from typing import List, Optional, Sequence, Tuple

from rainbow_decomp.models import EdgeColouredKn, FactorizationViolation, edge_count
from rainbow_decomp.settings import get_settings
from rainbow_decomp.utils.errors import InvalidArgumentError, RetryExhaustedError
from rainbow_decomp.utils.logging import get_logger

logger = get_logger(__name__)

# Search nodes allowed per restart, as a multiple of the edge count.
NODE_LIMIT_FACTOR = 200


def _require_even(n: int) -> None:
    if n < 2 or n % 2:
        raise InvalidArgumentError(
            message=f"n must be an even integer >= 2, got {n}",
            details={"n": n},
        )


def generate_circle_factorization(n: int) -> EdgeColouredKn:
    """Round-robin 1-factorization: colour r pairs n-1 with r and r+k with r-k mod n-1."""
    _require_even(n)
    m = n - 1
    matrix = [[-1] * n for _ in range(n)]
    for r in range(m):
        matrix[n - 1][r] = matrix[r][n - 1] = r
        for k in range(1, n // 2):
            a = (r + k) % m
            b = (r - k) % m
            matrix[a][b] = matrix[b][a] = r
    return EdgeColouredKn.from_matrix(matrix)


def generate_random_factorization(
    n: int, seed: int, restarts: Optional[int] = None
) -> EdgeColouredKn:
    """Sample a 1-factorization by randomized backtracking.

    Each restart runs a fail-first (fewest remaining colours) proper edge
    colouring search with a shuffled colour order per edge and a node limit.
    Uniformity over all 1-factorizations is not claimed.

    Args:
        n: Even vertex count
        seed: RNG seed; the result is a deterministic function of (n, seed)
        restarts: Restart budget (settings default when omitted)

    Returns:
        A valid EdgeColouredKn

    Raises:
        InvalidArgumentError: If n is odd or smaller than 2
        RetryExhaustedError: If every restart hit its node limit
    """
    _require_even(n)
    if restarts is None:
        restarts = get_settings().budgets.factorization_restarts
    rng = random.Random(seed)
    node_limit = NODE_LIMIT_FACTOR * max(1, edge_count(n))

    for attempt in range(restarts):
        matrix = _colour_attempt(n, rng, node_limit)
        if matrix is not None:
            logger.debug(
                "Random factorization found",
                n=n,
                attempt=attempt,
                operation="generate_random_factorization",
            )
            return EdgeColouredKn.from_matrix(matrix)

    logger.error(
        "Random factorization restarts exhausted",
        n=n,
        restarts=restarts,
        operation="generate_random_factorization",
    )
    raise RetryExhaustedError(
        message=f"No 1-factorization of K_{n} found within {restarts} restarts",
        details={"n": n, "seed": seed, "restarts": restarts},
    )


def _colour_attempt(n: int, rng: random.Random, node_limit: int) -> Optional[List[List[int]]]:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    full = (1 << (n - 1)) - 1
    used = [0] * n
    assign = [-1] * len(edges)
    uncoloured = set(range(len(edges)))
    frames: List[list] = []
    nodes = 0

    def apply(eid: int, c: int) -> None:
        u, v = edges[eid]
        bit = 1 << c
        used[u] |= bit
        used[v] |= bit
        assign[eid] = c
        uncoloured.discard(eid)

    def undo(eid: int) -> None:
        u, v = edges[eid]
        bit = 1 << assign[eid]
        used[u] &= ~bit
        used[v] &= ~bit
        assign[eid] = -1
        uncoloured.add(eid)

    while uncoloured:
        nodes += 1
        if nodes > node_limit:
            return None

        best, best_opts, best_count = -1, 0, n
        for eid in sorted(uncoloured):
            u, v = edges[eid]
            opts = full & ~(used[u] | used[v])
            count = opts.bit_count()
            if count < best_count:
                best, best_opts, best_count = eid, opts, count
                if count == 0:
                    break

        if best_count > 0:
            options = [c for c in range(n - 1) if best_opts >> c & 1]
            rng.shuffle(options)
            frames.append([best, options, 0])
            apply(best, options[0])
            continue

        # Dead end: advance the deepest frame that still has options.
        while frames:
            frame = frames[-1]
            eid, options, idx = frame
            undo(eid)
            idx += 1
            if idx < len(options):
                frame[2] = idx
                apply(eid, options[idx])
                break
            frames.pop()
        else:
            return None

    matrix = [[-1] * n for _ in range(n)]
    for eid, (u, v) in enumerate(edges):
        matrix[u][v] = matrix[v][u] = assign[eid]
    return matrix


def verify_factorization(g: EdgeColouredKn) -> List[FactorizationViolation]:
    """List every reason ``g`` fails to be a 1-factorization (empty when valid)."""
    violations: List[FactorizationViolation] = []
    classes = g.colour_classes()
    if len(classes) != g.n - 1:
        violations.append(FactorizationViolation(kind="colour-count", observed=len(classes)))

    for c in sorted(classes):
        class_edges = classes[c]
        covered = Counter(v for e in class_edges for v in e)
        for v in sorted(covered):
            if covered[v] > 1:
                violations.append(
                    FactorizationViolation(kind="vertex-repeat", colour=c, vertex=v, observed=covered[v])
                )
        if len(class_edges) != g.n // 2:
            violations.append(
                FactorizationViolation(kind="class-size", colour=c, observed=len(class_edges))
            )
    return violations


def factorization_signature(g: EdgeColouredKn) -> Tuple[Tuple[int, ...], ...]:
    """Isomorphism invariant of a 1-factorization.

    For every pair of colour classes the union is a disjoint union of even
    cycles; the signature is the sorted multiset of their cycle-length
    partitions. Different signatures certify non-isomorphic factorizations.
    """
    n = g.n
    classes = g.colour_classes()
    partner: dict = {}
    for c, class_edges in classes.items():
        mate = [-1] * n
        for u, v in class_edges:
            mate[u] = v
            mate[v] = u
        partner[c] = mate

    colours = sorted(classes)
    partitions = []
    for i, c1 in enumerate(colours):
        for c2 in colours[i + 1:]:
            m1, m2 = partner[c1], partner[c2]
            seen = [False] * n
            lengths = []
            for start in range(n):
                if seen[start] or m1[start] < 0:
                    continue
                length = 0
                v, use_first = start, True
                while not seen[v]:
                    seen[v] = True
                    length += 1
                    v = m1[v] if use_first else m2[v]
                    use_first = not use_first
                    if v < 0:
                        break
                lengths.append(length)
            partitions.append(tuple(sorted(lengths)))
    return tuple(sorted(partitions))


def permute_vertices(g: EdgeColouredKn, perm: Sequence[int]) -> EdgeColouredKn:
    """Relabel vertices: vertex v of ``g`` becomes ``perm[v]``."""
    if sorted(perm) != list(range(g.n)):
        raise InvalidArgumentError(message="perm must be a permutation of the vertex set")
    n = g.n
    matrix = [[-1] * n for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            c = g.colour_of(u, v)
            a, b = perm[u], perm[v]
            matrix[a][b] = matrix[b][a] = c
    return EdgeColouredKn.from_matrix(matrix)


__all__ = [
    "generate_circle_factorization",
    "generate_random_factorization",
    "verify_factorization",
    "factorization_signature",
    "permute_vertices",
]
