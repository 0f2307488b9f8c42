"""Tree canonical forms checked against networkx's enumeration of unlabelled trees."""

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_decomp.trees.canonical import canonical_form, centroids, tree_isomorphic
from rainbow_decomp.trees.shape import TreeShape
from rainbow_decomp.utils.errors import InvalidArgumentError

# Unlabelled trees on 1..12 vertices.
TREE_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 3, 6: 6, 7: 11, 8: 23, 9: 47, 10: 106, 11: 235, 12: 551}


def _shape(graph: nx.Graph) -> TreeShape:
    return TreeShape.build(graph.number_of_nodes(), list(graph.edges()))


def _all_trees(order: int):
    if order == 1:
        return [TreeShape.build(1, [])]
    return [_shape(g) for g in nx.nonisomorphic_trees(order)]


class TestCanonicalForm:
    """AHU strings separate non-isomorphic trees."""

    @pytest.mark.parametrize("order", sorted(TREE_COUNTS))
    def test_forms_are_injective(self, order):
        forms = {canonical_form(t) for t in _all_trees(order)}
        assert len(forms) == TREE_COUNTS[order]

    def test_relabelling_preserves_forms_on_twelve_vertices(self):
        rng = random.Random(0)
        for t in _all_trees(12)[::25]:
            perm = list(range(12))
            rng.shuffle(perm)
            assert canonical_form(t.relabel(perm)) == canonical_form(t)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=2, max_value=40), st.randoms(use_true_random=False))
    def test_random_trees_agree_with_networkx(self, order, rnd):
        """Random recursive trees: the verdict matches nx.is_isomorphic."""
        parents_a = [rnd.randrange(v) for v in range(1, order)]
        parents_b = [rnd.randrange(v) for v in range(1, order)]
        edges_a = [(p, v) for v, p in enumerate(parents_a, start=1)]
        edges_b = [(p, v) for v, p in enumerate(parents_b, start=1)]
        expected = nx.is_isomorphic(nx.Graph(edges_a), nx.Graph(edges_b))
        a = TreeShape.build(order, edges_a)
        assert tree_isomorphic(a, TreeShape.build(order, edges_b)) == expected
        perm = list(range(order))
        rnd.shuffle(perm)
        assert tree_isomorphic(a, a.relabel(perm))

    def test_single_vertex(self):
        assert canonical_form(TreeShape.build(1, [])) == "()"

    def test_non_tree_is_rejected(self):
        with pytest.raises(InvalidArgumentError):
            canonical_form(TreeShape.build(4, [(0, 1), (2, 3)]))


class TestCentroids:
    def test_path_has_two_centroids(self):
        assert centroids(TreeShape.build(4, [(0, 1), (1, 2), (2, 3)])) == [1, 2]

    def test_star_centre(self):
        assert centroids(TreeShape.build(5, [(3, v) for v in (0, 1, 2, 4)])) == [3]


class TestTreeIsomorphic:
    def test_path_and_star_differ(self):
        path = TreeShape.build(4, [(0, 1), (1, 2), (2, 3)])
        star = TreeShape.build(4, [(0, 1), (0, 2), (0, 3)])
        assert not tree_isomorphic(path, star)
        assert tree_isomorphic(path, path.relabel([3, 1, 0, 2]))

    def test_sizes_differ(self):
        assert not tree_isomorphic(TreeShape.build(2, [(0, 1)]), TreeShape.build(3, [(0, 1), (1, 2)]))
