"""Unit tests for robust matchability, RMBG search and regularization."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_decomp.rmbg.graph import Rmbg, dump_rmbg, load_rmbg, rmbg_from_json, rmbg_to_json
from rainbow_decomp.rmbg.robust import (
    ExhaustiveMode,
    SampledMode,
    is_robustly_matchable,
    regularize,
    robust_match,
    search_rmbg,
    search_rmbg_sized,
)
from rainbow_decomp.utils.errors import (
    BudgetExceededError,
    InfeasibleError,
    InvalidArgumentError,
    InvalidInstanceError,
    RefutationError,
    SearchFailedError,
)


@pytest.fixture
def sparse_rmbg() -> Rmbg:
    """RMBG(3, 2, 2): two X-vertices see Z, the third sees Y."""
    return Rmbg.build(3, 2, 2, [[2, 3], [2, 3], [0, 1]])


@pytest.fixture
def broken_rmbg() -> Rmbg:
    """x0 and x1 both see only y0."""
    return Rmbg.build(3, 2, 2, [[0], [0], [2, 3]])


class TestVerification:
    """is_robustly_matchable and robust_match."""

    def test_complete_graph_is_proven(self):
        verdict = is_robustly_matchable(Rmbg.complete(3, 2, 2))
        assert verdict.status == "proven"
        assert verdict.checked == 2

    def test_sparse_graph_is_proven(self, sparse_rmbg):
        assert is_robustly_matchable(sparse_rmbg).status == "proven"

    def test_refutation_names_a_witness(self, broken_rmbg):
        verdict = is_robustly_matchable(broken_rmbg)
        assert verdict.status == "refuted"
        assert verdict.witness == [0]
        assert verdict.checked == 1

    def test_sampled_mode(self, sparse_rmbg):
        verdict = is_robustly_matchable(sparse_rmbg, SampledMode(draws=10, seed=3))
        assert verdict.status == "sampled-pass"
        assert verdict.checked == 10
        assert verdict.mode == "sampled"

    def test_exhaustive_limit(self):
        with pytest.raises(BudgetExceededError):
            is_robustly_matchable(Rmbg.complete(6, 4, 4), ExhaustiveMode(limit=5))

    def test_no_admissible_subset(self):
        """|Y| below the deficiency leaves nothing to check."""
        h = Rmbg.build(3, 1, 1, [[0], [1], [0]])
        assert is_robustly_matchable(h).status == "proven"

    @pytest.mark.parametrize("y_prime", [[0], [1]])
    def test_robust_match_is_perfect(self, sparse_rmbg, y_prime):
        match = robust_match(sparse_rmbg, y_prime)
        allowed = set(y_prime) | {2, 3}
        assert sorted(match.pairs) == [0, 1, 2]
        assert set(match.pairs.values()) == allowed
        for x, r in match.pairs.items():
            assert r in sparse_rmbg.adjacency[x]

    def test_robust_match_reports_hall_violator(self, broken_rmbg):
        with pytest.raises(RefutationError) as exc_info:
            robust_match(broken_rmbg, [1])
        details = exc_info.value.details
        assert set(details["hall_violator"]) >= {0, 1}
        assert len(details["neighbourhood"]) < len(details["hall_violator"])

    @pytest.mark.parametrize("y_prime", [[], [0, 1], [2], [0, 0]])
    def test_robust_match_rejects_bad_subsets(self, sparse_rmbg, y_prime):
        with pytest.raises(InvalidArgumentError):
            robust_match(sparse_rmbg, y_prime)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 3)), max_size=12))
    def test_adding_edges_preserves_proof(self, extra):
        h = Rmbg.build(3, 2, 2, [[2, 3], [2, 3], [0, 1]])
        assert is_robustly_matchable(h.with_edges(extra)).status == "proven"


class TestSearch:
    """Randomized RMBG search."""

    def test_m2_degree8_is_proven_over_all_subsets(self):
        h = search_rmbg(2, 8, seed=0)
        verdict = is_robustly_matchable(h)
        assert (h.x_size, h.y_size, h.z_size) == (6, 4, 4)
        assert h.max_degree() <= 8
        assert verdict.status == "proven"
        assert verdict.checked == 6

    def test_deterministic(self):
        assert search_rmbg(2, 8, seed=5) == search_rmbg(2, 8, seed=5)

    def test_exact_x_degree(self):
        h = search_rmbg_sized(6, 4, 4, 6, seed=1, x_degree=6)
        assert h.x_degrees() == [6] * 6
        assert h.max_degree() <= 6

    def test_impossible_degree_fails(self):
        """With X-degree 1 some Y′ always strands an X-vertex."""
        with pytest.raises(SearchFailedError) as exc_info:
            search_rmbg_sized(3, 2, 2, 1, seed=0, budget=5)
        assert exc_info.value.exit_code == 2

    def test_bad_arguments(self):
        with pytest.raises(InvalidArgumentError):
            search_rmbg(0, 4, seed=0)
        with pytest.raises(InvalidArgumentError):
            search_rmbg_sized(2, 2, 3, 4, seed=0)
        with pytest.raises(InvalidArgumentError):
            search_rmbg_sized(3, 2, 2, 2, seed=0, x_degree=3)


class TestRegularize:
    """Max-flow extension to (4d, 3d)-regular graphs."""

    def test_completes_a_missing_edge(self):
        h = Rmbg.complete(3, 2, 2).with_edges([])
        rows = [list(row) for row in h.adjacency]
        rows[0].remove(0)
        out = regularize(Rmbg.build(3, 2, 2, rows), 1)
        assert out == Rmbg.complete(3, 2, 2)

    def test_exact_degrees_and_edge_count(self):
        h = search_rmbg(2, 8, seed=0)
        out = regularize(h, 2)
        assert out.x_degrees() == [8] * 6
        assert out.right_degrees() == [6] * 8
        assert out.edge_count == 12 * 2 * 2
        assert set(h.edges()) <= set(out.edges())

    def test_supergraph_of_sparse(self, sparse_rmbg):
        out = regularize(sparse_rmbg, 1)
        assert set(sparse_rmbg.edges()) <= set(out.edges())
        assert out.edge_count == 12

    def test_infeasible_d(self, sparse_rmbg):
        with pytest.raises(InfeasibleError):
            regularize(sparse_rmbg, 2)

    def test_bad_shape_and_d(self, sparse_rmbg):
        with pytest.raises(InvalidArgumentError):
            regularize(sparse_rmbg, 0)
        with pytest.raises(InvalidArgumentError):
            regularize(Rmbg.complete(3, 3, 2), 1)


class TestRmbgFormat:
    def test_standard_shape(self, sparse_rmbg):
        assert rmbg_to_json(sparse_rmbg) == {"m": 1, "adj": [[2, 3], [2, 3], [0, 1]]}

    def test_explicit_sizes(self):
        h = Rmbg.complete(2, 1, 1)
        data = rmbg_to_json(h)
        assert data["x_size"] == 2 and data["y_size"] == 1 and data["z_size"] == 1
        assert rmbg_from_json(data) == h

    def test_file_round_trip(self, tmp_path, sparse_rmbg):
        path = tmp_path / "h.json"
        dump_rmbg(sparse_rmbg, path)
        assert load_rmbg(path) == sparse_rmbg

    @pytest.mark.parametrize(
        "data",
        [
            {"m": 1},
            {"m": 0, "adj": []},
            {"x_size": 3, "adj": [[0], [0], [0]]},
            {"m": 1, "adj": [[0], [9], [1]]},
        ],
    )
    def test_invalid_documents(self, data):
        with pytest.raises(InvalidInstanceError):
            rmbg_from_json(data)
