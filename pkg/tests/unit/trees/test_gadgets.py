"""Unit tests for tree shapes, the target trees, absorber chains and connectors."""

from itertools import product

import pytest

from rainbow_decomp.trees.canonical import canonical_form
from rainbow_decomp.trees.connector import build_connector
from rainbow_decomp.trees.gadgets import (
    build_absorber_chain,
    build_T,
    build_T_delta3,
    delta3_gadget_vertices,
    delta3_spine_length,
    slot_map,
    spine_length,
)
from rainbow_decomp.trees.shape import TreeShape, dump_tree, load_tree, tree_from_json, tree_to_json
from rainbow_decomp.utils.errors import InvalidArgumentError, InvalidInstanceError


class TestTreeShape:
    def test_edges_are_normalized(self):
        t = TreeShape.build(3, [(2, 1), (1, 0)])
        assert t.edges == ((0, 1), (1, 2))
        assert t.is_tree()

    @pytest.mark.parametrize("edges", [[(0, 1), (1, 0)], [(0, 3)]])
    def test_structural_errors(self, edges):
        with pytest.raises(InvalidArgumentError):
            TreeShape.build(3, edges)

    def test_forest_is_not_a_tree(self):
        forest = TreeShape.build(4, [(0, 1), (2, 3)])
        assert not forest.is_tree()
        with pytest.raises(InvalidArgumentError):
            forest.parents()

    def test_parents(self):
        assert TreeShape.build(4, [(0, 1), (0, 2), (2, 3)]).parents() == [-1, 0, 0, 2]

    def test_relabel_moves_labels(self):
        t = TreeShape.build(3, [(0, 1), (1, 2)], {"B": [2]})
        assert t.relabel([2, 1, 0]).label("B") == (0,)
        with pytest.raises(InvalidArgumentError):
            t.relabel([0, 0, 1])


class TestTreeFormat:
    def test_round_trip(self, tmp_path):
        t = TreeShape.build(5, [(0, 1), (0, 2), (2, 3), (2, 4)], {"B": [3, 4]})
        path = tmp_path / "t.json"
        dump_tree(t, path)
        assert load_tree(path) == t
        assert tree_to_json(t) == {"parents": [-1, 0, 0, 2, 2], "labels": {"B": [3, 4]}}

    @pytest.mark.parametrize(
        "data",
        [
            {"parents": []},
            {"parents": [0, 0]},
            {"parents": [-1, 1]},
            {"parents": [-1, 7]},
            {"parents": [-1, 2, 3, 1]},
            {"parents": [-1, 0], "labels": []},
        ],
    )
    def test_invalid_documents(self, data):
        with pytest.raises(InvalidInstanceError):
            tree_from_json(data)


class TestBuildT:
    """Spine, pendant paths and the B-set."""

    def test_small_absorbers(self):
        t = build_T(60, 2, 3, absorber_size=3)
        assert spine_length(60, 2, 3, 3) == 40
        assert t.vertex_count == 60
        assert t.is_tree()
        assert t.label("attachments") == (0, 5, 10)
        assert t.max_degree() == 6
        degrees = t.degrees()
        assert [degrees[v] for v in t.label("B")] == [1, 1, 1]

    def test_b_vertices_hang_from_the_spine_end(self):
        t = build_T(60, 2, 3, absorber_size=3)
        b_set = set(t.label("B"))
        anchors = sorted(a if b in b_set else b for a, b in t.edges if a in b_set or b in b_set)
        assert anchors == [38, 39, 40]

    def test_default_absorber_size(self):
        t = build_T(2200, 2, 1)
        assert t.is_tree()
        assert t.max_degree() == 512
        assert len(t.label("spine")) == spine_length(2200, 2, 1) + 1

    @pytest.mark.parametrize("n,r,b,k", [(20, 2, 3, 3), (60, 0, 3, 3), (60, 2, 0, 3), (60, 2, 3, 1)])
    def test_infeasible(self, n, r, b, k):
        with pytest.raises(InvalidArgumentError):
            build_T(n, r, b, absorber_size=k)


class TestBuildTDelta3:
    """Maximum-degree-3 variant."""

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_degree_and_size(self, r):
        n = delta3_gadget_vertices(r, 2) + 3 + 1 + 20
        t = build_T_delta3(n, r, 3, depth=2)
        assert t.vertex_count == n
        assert t.is_tree()
        assert t.max_degree() == 3
        assert delta3_spine_length(n, r, 3, 2) == 20

    def test_gadget_count(self):
        """2Lr + (r-1)(6L-3) + 6L - 7 with L = 4."""
        assert delta3_gadget_vertices(2, 2) == 16 + 21 + 17

    def test_default_depth(self):
        t = build_T_delta3(2100, 1, 5)
        assert t.is_tree()
        assert t.max_degree() <= 3

    def test_chosen_edges_are_tree_edges(self):
        t = build_T_delta3(100, 2, 3, depth=2)
        chosen = t.label("chosen_edges")
        pairs = {(min(a, b), max(a, b)) for a, b in zip(chosen[0::2], chosen[1::2])}
        assert pairs <= set(t.edges)

    def test_spine_too_short(self):
        with pytest.raises(InvalidArgumentError):
            build_T_delta3(60, 2, 3, depth=2)


class TestAbsorberChain:
    def test_every_completion_is_the_same_tree(self):
        chain = build_absorber_chain([4, 4, 4])
        forms = set()
        for choice in product(range(4), repeat=3):
            t = chain.complete(choice)
            assert t.is_tree()
            forms.add(canonical_form(t))
        assert len(forms) == 1
        assert chain.vertex_count == 4 + 3 * 4 * 4

    def test_slot_map(self):
        chain = build_absorber_chain([2, 1])
        mapping = slot_map(chain)
        assert sorted(mapping.values()) == [(0, 0), (0, 1), (1, 0)]

    def test_bad_choices(self):
        chain = build_absorber_chain([2, 2])
        with pytest.raises(InvalidArgumentError):
            chain.complete([0])
        with pytest.raises(InvalidArgumentError):
            chain.complete([0, 2])

    @pytest.mark.parametrize("sizes", [[], [2, 0]])
    def test_bad_sizes(self, sizes):
        with pytest.raises(InvalidArgumentError):
            build_absorber_chain(sizes)


class TestConnector:
    def test_two_triples(self):
        c = build_connector([(0, 1, 2), (3, 4, 5)])
        assert c.new_vertices == [(6, 7, 8, 9), (10, 11, 12, 13)]
        assert c.vertex_count == 14
        shape = c.as_shape()
        degrees = shape.degrees()
        assert len(shape.edges) == 12
        assert [degrees[v] for v in shape.label("centres")] == [3, 3]
        assert all(degrees[u] == 1 for u in range(6))

    def test_empty(self):
        c = build_connector([])
        assert c.vertex_count == 0
        assert c.as_shape().vertex_count == 1

    @pytest.mark.parametrize("hyperedges", [[(0, 1), (1, 2)], [(0, 0)], [(0, 1), (2, 3, 4)], [()]])
    def test_invalid(self, hyperedges):
        with pytest.raises(InvalidArgumentError):
            build_connector(hyperedges)
