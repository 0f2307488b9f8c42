"""Unit tests for greedy rainbow rooted embeddings."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.core.factorization import generate_circle_factorization
from rainbow_decomp.embed.greedy import (
    EmbeddingPattern,
    EmbeddingTask,
    build_task,
    candidate_set,
    embed_with_retries,
    greedy_embed,
)
from rainbow_decomp.models import EdgeSet, edge_key
from rainbow_decomp.utils.errors import EmbedStuckError, InvalidArgumentError, RetryExhaustedError


def _rooted_path(root_image: int, n: int, length: int = 2) -> EmbeddingPattern:
    """Path 0-1-...-length rooted at its first vertex."""
    return EmbeddingPattern(
        vertex_count=length + 1,
        edges=[(j, j + 1) for j in range(length)],
        roots={0: root_image},
        target_vertices=tuple(range(n)),
        colours=tuple(range(n - 1)),
    )


def _assert_valid_embedding(task, result):
    seen_edges = set()
    for pattern, placement, edges in zip(task.patterns, result.placements, result.edges):
        assert len(set(placement.values())) == pattern.vertex_count
        for x, v in pattern.roots.items():
            assert placement[x] == v
        for x, v in placement.items():
            if x not in pattern.roots:
                assert v in pattern.target_vertices
        images = sorted(edge_key(placement[a], placement[b]) for a, b in pattern.edges)
        assert images == edges
        colours = [task.g.colour_of(u, v) for u, v in edges]
        assert len(colours) == len(set(colours))
        assert set(colours) <= set(pattern.colours)
        assert not seen_edges & set(edges)
        seen_edges |= set(edges)


class TestEmbeddingPattern:
    def test_bfs_order_starts_with_roots(self):
        p = EmbeddingPattern(vertex_count=5, edges=[(0, 1), (1, 2), (3, 4)], roots={2: 7})
        order = p.bfs_order()
        assert order[0] == 2
        assert sorted(order) == [0, 1, 2, 3, 4]
        assert order.index(1) < order.index(0)

    def test_adjacent_roots_are_rejected(self):
        with pytest.raises(PydanticValidationError):
            EmbeddingPattern(vertex_count=2, edges=[(0, 1)], roots={0: 0, 1: 1})

    def test_root_placement_must_be_injective(self):
        with pytest.raises(PydanticValidationError):
            EmbeddingPattern(vertex_count=3, edges=[(0, 1)], roots={0: 4, 2: 4})

    def test_max_degree(self):
        star = EmbeddingPattern(vertex_count=4, edges=[(0, 1), (0, 2), (0, 3)])
        assert star.max_degree() == 3


class TestEmbeddingTask:
    def test_degree_bound_is_enforced(self, k6):
        star = EmbeddingPattern(vertex_count=4, edges=[(0, 1), (0, 2), (0, 3)])
        with pytest.raises(PydanticValidationError):
            EmbeddingTask(g=k6, patterns=[star], max_degree=2, gamma=0.1, size_bound=4)

    def test_placement_range_is_enforced(self, k6):
        with pytest.raises(PydanticValidationError):
            EmbeddingTask(g=k6, patterns=[_rooted_path(9, 6)], max_degree=2, gamma=0.1, size_bound=3)

    def test_build_task_reads_bounds(self, k6):
        task = build_task(k6, [_rooted_path(0, 6, 3)], gamma=0.1)
        assert task.max_degree == 2
        assert task.size_bound == 4

    def test_build_task_needs_patterns(self, k6):
        with pytest.raises(InvalidArgumentError):
            build_task(k6, [], gamma=0.1)


class TestCandidateSet:
    def test_colour_filter(self, k4):
        """From vertex 0 only (0,3) has colour 0."""
        cands = candidate_set(k4, None, [0], {1, 2, 3}, {0}, {0}, set(), set())
        assert cands == [3]

    def test_used_and_avoided_vertices(self, k4):
        cands = candidate_set(k4, None, [0], {1, 2, 3}, {0, 1, 2}, {0, 1}, set(), {2})
        assert cands == [3]

    def test_consumed_edge(self, k4):
        cands = candidate_set(k4, None, [0], {1, 2, 3}, {0, 1, 2}, {0}, set(), set(), consumed={(0, 3)})
        assert cands == [1, 2]


class TestGreedyEmbed:
    """Edge-disjoint rainbow placements."""

    def test_rooted_paths_in_k10(self, k10):
        task = build_task(k10, [_rooted_path(r, 10) for r in range(5)], gamma=0.25)
        result = greedy_embed(task, seed=0)
        _assert_valid_embedding(task, result)
        assert sum(result.degree_ledger.values()) == 2 * 2 * 5
        assert result.avoid_threshold == 5

    def test_deterministic(self, k10):
        task = build_task(k10, [_rooted_path(r, 10) for r in range(4)], gamma=0.25)
        assert greedy_embed(task, seed=9) == greedy_embed(task, seed=9)

    def test_busy_vertices_are_avoided(self, k10):
        """With γ = 0 every vertex of positive degree is avoided by later patterns."""
        first = _rooted_path(0, 10, length=1)
        second = _rooted_path(5, 10, length=1)
        result = greedy_embed(build_task(k10, [first, second], gamma=0.0), seed=2)
        v1 = result.placements[0][1]
        assert result.avoid_threshold == 0
        assert result.placements[1][1] not in {0, v1}

    def test_restricted_host(self, k6):
        host = EdgeSet.of(6, [(0, 1), (1, 2)])
        task = build_task(k6, [_rooted_path(0, 6)], gamma=0.5, host=host)
        result = greedy_embed(task, seed=0)
        assert result.edges == [[(0, 1), (1, 2)]]

    def test_stuck_reports_exclusions(self, k6):
        pattern = EmbeddingPattern(vertex_count=2, edges=[(0, 1)], roots={0: 0}, target_vertices=(1, 2), colours=())
        with pytest.raises(EmbedStuckError) as exc_info:
            greedy_embed(build_task(k6, [pattern], gamma=0.1), seed=0)
        details = exc_info.value.details
        assert details["index"] == 0
        assert details["pattern_vertex"] == 1
        assert details["exclusions"]["colour_not_allowed"] == 2
        assert exc_info.value.exit_code == 1

    def test_retries_exhaust(self, k6):
        pattern = EmbeddingPattern(vertex_count=2, edges=[(0, 1)], roots={0: 0}, target_vertices=(), colours=(0,))
        with pytest.raises(RetryExhaustedError) as exc_info:
            embed_with_retries(build_task(k6, [pattern], gamma=0.1), seed=0, retries=3)
        assert exc_info.value.details["retries"] == 3
        assert exc_info.value.exit_code == 2

    def test_retries_return_first_success(self, k10):
        task = build_task(k10, [_rooted_path(0, 10)], gamma=0.25)
        assert embed_with_retries(task, seed=4, retries=2) == greedy_embed(task, seed=4)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_any_success_is_valid(self, seed):
        g = generate_circle_factorization(12)
        task = build_task(g, [_rooted_path(r, 12, 3) for r in range(6)], gamma=0.3)
        try:
            result = greedy_embed(task, seed=seed)
        except EmbedStuckError:
            return
        _assert_valid_embedding(task, result)
