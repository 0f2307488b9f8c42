"""Unit tests for rainbow predicates, boundedness, splits and the instance format."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_decomp.core.factorization import generate_circle_factorization
from rainbow_decomp.core.instance_io import (
    decomposition_from_json,
    decomposition_to_json,
    dump_instance,
    instance_from_json,
    load_instance,
)
from rainbow_decomp.core.predicates import (
    bounded_threshold,
    check_bounded,
    colours_of,
    is_rainbow,
    is_spanning_tree,
    verify_decomposition,
)
from rainbow_decomp.core.splits import random_split
from rainbow_decomp.models import EdgeSet
from rainbow_decomp.utils.errors import InvalidArgumentError, InvalidInstanceError


class TestRainbow:
    def test_triangle_in_k4_is_rainbow(self, k4):
        assert is_rainbow(k4, [(0, 1), (1, 2), (0, 2)])
        assert colours_of(k4, [(0, 1), (1, 2), (0, 2)]) == [2, 0, 1]

    def test_matching_edges_share_a_colour(self, k4):
        """(0,3) and (1,2) both have colour 0."""
        assert not is_rainbow(k4, EdgeSet.of(4, [(0, 3), (1, 2)]))

    def test_empty_set_is_rainbow(self, k4):
        assert is_rainbow(k4, [])


class TestSpanningTree:
    def test_path_is_a_tree(self):
        assert is_spanning_tree(4, [(0, 1), (1, 2), (2, 3)])

    def test_cycle_plus_isolated_vertex_is_not(self):
        assert not is_spanning_tree(4, [(0, 1), (1, 2), (0, 2)])

    def test_wrong_edge_count(self):
        assert not is_spanning_tree(4, [(0, 1), (1, 2)])


class TestBoundedness:
    """m-boundedness of (G, Vs, Cs) triples."""

    @pytest.fixture
    def triple(self):
        return [(0, 1), (0, 2)], [{0, 1}, {0, 2}], [{0}, {0, 1}]

    def test_violations_at_m1(self, k4, triple):
        G, vs, cs = triple
        report = check_bounded(k4, G, vs, cs, 1)
        kinds = [v.kind for v in report.violations]
        assert not report.bounded
        assert kinds.count("set-size") == 3
        assert kinds.count("vertex-incidence") == 1
        assert kinds.count("vertex-degree") == 1
        assert kinds.count("colour-incidence") == 1
        assert "colour-multiplicity" not in kinds

    def test_bounded_at_m2(self, k4, triple):
        G, vs, cs = triple
        assert check_bounded(k4, G, vs, cs, 2).bounded
        assert bounded_threshold(k4, G, vs, cs) == 2

    def test_colour_multiplicity(self, k4):
        """A whole colour class has multiplicity n/2."""
        report = check_bounded(k4, [(0, 3), (1, 2)], [], [], 1)
        assert [(v.kind, v.witness, v.observed) for v in report.violations if v.kind == "colour-multiplicity"] == [
            ("colour-multiplicity", 0, 2)
        ]

    def test_empty_triple_is_zero_bounded(self, k4):
        assert check_bounded(k4, [], [], [], 0).bounded

    def test_length_mismatch(self, k4):
        with pytest.raises(InvalidArgumentError):
            check_bounded(k4, [], [{0}], [], 1)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=5))
    def test_monotone_in_m(self, m):
        g = generate_circle_factorization(6)
        G = [(0, 1), (0, 2), (0, 3), (4, 5)]
        vs = [{0, 1, 2}, {0, 3}]
        cs = [{0, 1}, {2, 3, 4}]
        if check_bounded(g, G, vs, cs, m).bounded:
            assert check_bounded(g, G, vs, cs, m + 1).bounded


class TestRandomSplit:
    """Independent random splits."""

    def test_cells_partition_the_universe(self):
        cells = random_split(range(200), [0.5, 0.3, 0.2], seed=3)
        assert len(cells) == 3
        assert sorted(x for cell in cells for x in cell) == list(range(200))

    def test_remainder_cell(self):
        cells = random_split(range(100), [0.2, 0.2], seed=0)
        assert len(cells) == 3
        assert sum(len(c) for c in cells) == 100

    def test_deterministic_and_order_free(self):
        a = random_split([5, 1, 9, 3, 7], [0.5, 0.5], seed=11)
        b = random_split([9, 7, 5, 3, 1], [0.5, 0.5], seed=11)
        assert a == b

    def test_empty_universe(self):
        assert random_split([], [0.5, 0.5], seed=0) == [[], []]

    @pytest.mark.parametrize("weights", [[], [0.7, 0.7], [-0.1, 0.5]])
    def test_bad_weights(self, weights):
        with pytest.raises(InvalidArgumentError):
            random_split(range(10), weights, seed=0)

    def test_zero_weight_cell_stays_empty(self):
        cells = random_split(range(50), [0.0, 1.0], seed=5)
        assert cells[0] == []
        assert len(cells[1]) == 50


class TestVerifyDecomposition:
    def test_k2(self):
        g = generate_circle_factorization(2)
        assert verify_decomposition(g, [EdgeSet.of(2, [(0, 1)])]).valid

    def test_paths_in_k4_are_not_rainbow(self, k4):
        parts = [[(0, 1), (1, 2), (2, 3)], [(0, 2), (0, 3), (1, 3)]]
        audit = verify_decomposition(k4, parts)
        assert not audit.valid
        assert "part 0: not rainbow" in audit.diagnostics
        assert "part 1: not rainbow" in audit.diagnostics

    def test_missing_edges(self, k4):
        audit = verify_decomposition(k4, [[(0, 1), (0, 2), (0, 3)]])
        assert "coverage: 3 edges of K_4 are in no part" in audit.diagnostics

    def test_overlap(self, k4):
        audit = verify_decomposition(k4, [[(0, 1), (1, 2), (2, 3)], [(0, 1), (0, 2), (0, 3)]])
        assert any(d.startswith("overlap: edge (0, 1)") for d in audit.diagnostics)


class TestInstanceFormat:
    def test_file_round_trip(self, tmp_path, k8):
        path = tmp_path / "k8.json"
        dump_instance(k8, path)
        assert load_instance(path) == k8
        assert path.read_bytes().endswith(b"\n")

    def test_non_factorization_is_located(self):
        with pytest.raises(InvalidInstanceError) as exc_info:
            instance_from_json({"n": 4, "colours": [0, 1, 0, 0, 1, 2]})
        err = exc_info.value
        assert err.exit_code == 3
        assert err.locations[0].field == "colours[0]"

    def test_wrong_length(self):
        with pytest.raises(InvalidInstanceError) as exc_info:
            instance_from_json({"n": 4, "colours": [0, 1, 2]})
        assert exc_info.value.locations[0].field == "colours"

    def test_non_integer_colour(self):
        with pytest.raises(InvalidInstanceError) as exc_info:
            instance_from_json({"n": 4, "colours": [2, 1, 0, "x", 1, 2]})
        assert exc_info.value.locations[0].field == "colours[3]"

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(InvalidInstanceError):
            load_instance(path)

    def test_top_level_must_be_object(self):
        with pytest.raises(InvalidInstanceError):
            instance_from_json([1, 2, 3])

    def test_decomposition_format(self):
        parts = [EdgeSet.of(4, [(1, 0), (2, 1)])]
        data = decomposition_to_json(4, parts)
        assert data == {"n": 4, "parts": [[[0, 1], [1, 2]]]}
        assert decomposition_from_json(data) == parts

    def test_decomposition_with_bad_edge(self):
        with pytest.raises(InvalidInstanceError) as exc_info:
            decomposition_from_json({"n": 4, "parts": [[[0, 9]]]})
        assert exc_info.value.locations[0].field == "parts[0]"
