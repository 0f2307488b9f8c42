"""Unit tests for hypergraphs, the nibble, the greedy baseline and (γ, F)-perfectness."""

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_decomp.hypermatch.hypergraph import (
    Hypergraph,
    degree_stats,
    dump_hypergraph,
    hypergraph_from_json,
    load_hypergraph,
    random_uniform_hypergraph,
)
from rainbow_decomp.hypermatch.matching import (
    build_matching_report,
    check_gamma_perfect,
    greedy_matching,
    nibble_matching,
    report_for,
)
from rainbow_decomp.utils.errors import InternalInconsistencyError, InvalidArgumentError, InvalidInstanceError


def _assert_maximal_matching(h: Hypergraph, matching):
    covered = set()
    for k in matching:
        e = set(h.edges[k])
        assert not covered & e, "matching edges must be vertex-disjoint"
        covered |= e
    for e in h.edges:
        assert covered & set(e), "a maximal matching leaves no free edge"


@pytest.fixture
def near_regular() -> Hypergraph:
    return random_uniform_hypergraph(600, 3, 20, 3, seed=7)


class TestHypergraphModel:
    def test_edges_are_normalized(self):
        h = Hypergraph.build(4, [(3, 1), (2, 0)])
        assert h.edges == ((1, 3), (0, 2))
        assert h.uniformity() == 2

    def test_mixed_uniformity(self):
        assert Hypergraph.build(4, [(0, 1), (1, 2, 3)]).uniformity() is None

    @pytest.mark.parametrize("edges", [[(0,)], [(0, 0)], [(0, 4)]])
    def test_invalid_edges(self, edges):
        with pytest.raises(InvalidArgumentError):
            Hypergraph.build(4, edges)

    def test_family_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            Hypergraph.build(4, [], {"F": [5]})

    def test_json_round_trip(self, tmp_path):
        h = Hypergraph.build(5, [(0, 1, 2), (2, 3, 4)], {"F": [0, 4]})
        path = tmp_path / "h.json"
        dump_hypergraph(h, path)
        assert load_hypergraph(path) == h

    def test_json_rejects_garbage(self):
        with pytest.raises(InvalidInstanceError):
            hypergraph_from_json({"vertex_count": 3, "edges": [[0, 7]]})


class TestRandomUniform:
    def test_degree_and_codegree_caps(self, near_regular):
        stats = degree_stats(near_regular)
        assert near_regular.uniformity() == 3
        assert stats.max_degree <= 20
        assert stats.max_codegree <= 3
        assert stats.average_degree > 15

    def test_deterministic(self):
        assert random_uniform_hypergraph(100, 3, 5, 2, seed=1) == random_uniform_hypergraph(100, 3, 5, 2, seed=1)

    def test_bad_arguments(self):
        with pytest.raises(InvalidArgumentError):
            random_uniform_hypergraph(2, 3, 5, 1, seed=0)
        with pytest.raises(InvalidArgumentError):
            random_uniform_hypergraph(10, 3, 0, 1, seed=0)


class TestMatchings:
    """Nibble and greedy matchings."""

    def test_two_overlapping_edges(self):
        h = Hypergraph.build(3, [(0, 1), (1, 2)])
        assert len(greedy_matching(h, seed=0).matching) == 1
        assert len(nibble_matching(h, 0.5, 5, seed=0).matching) == 1

    def test_empty_hypergraph(self):
        h = Hypergraph.build(0, [])
        report = nibble_matching(h, 0.1, 10, seed=0)
        assert report.matching == []
        assert report.coverage == 1.0

    def test_nibble_is_a_maximal_matching(self, near_regular):
        report = nibble_matching(near_regular, 0.1, 60, seed=0)
        _assert_maximal_matching(near_regular, report.matching)
        assert report.covered_vertices == 3 * len(report.matching)
        assert report.coverage >= 0.7

    def test_greedy_is_a_maximal_matching(self, near_regular):
        report = greedy_matching(near_regular, seed=0)
        _assert_maximal_matching(near_regular, report.matching)
        assert report.method == "greedy"

    def test_nibble_deterministic(self, near_regular):
        a = nibble_matching(near_regular, 0.1, 30, seed=4)
        b = nibble_matching(near_regular, 0.1, 30, seed=4)
        assert a == b

    def test_report_for_dispatch(self, near_regular):
        assert report_for(near_regular, "greedy", 0.1, 5, 0).method == "greedy"
        assert report_for(near_regular, "nibble", 0.1, 5, 0).method == "nibble"
        with pytest.raises(InvalidArgumentError):
            report_for(near_regular, "exact", 0.1, 5, 0)

    @pytest.mark.parametrize("bite,rounds", [(0.0, 5), (1.5, 5), (0.1, -1)])
    def test_bad_nibble_arguments(self, near_regular, bite, rounds):
        with pytest.raises(InvalidArgumentError):
            nibble_matching(near_regular, bite, rounds, seed=0)

    @settings(max_examples=40, deadline=None)
    @given(
        st.integers(min_value=6, max_value=40),
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=0, max_value=10_000),
    )
    def test_nibble_always_maximal(self, vertices, degree, seed):
        h = random_uniform_hypergraph(vertices, 3, degree, 2, seed=seed)
        _assert_maximal_matching(h, nibble_matching(h, 0.2, 10, seed=seed).matching)

    def test_overlapping_matching_is_rejected(self):
        h = Hypergraph.build(3, [(0, 1), (1, 2)])
        with pytest.raises(InternalInconsistencyError):
            build_matching_report(h, [0, 1])


class TestGammaPerfect:
    """Per-family ledger against γ·max(|F|, N^{2/5})."""

    @pytest.fixture
    def seven_uncovered(self):
        """10^4 vertices; a 100-vertex family with exactly 7 uncovered vertices."""
        edges = [(2 * j, 2 * j + 1) for j in range(46)] + [(92, 100)]
        h = Hypergraph.build(10_000, edges, {"F": list(range(100))})
        return h, list(range(len(edges)))

    def test_threshold_met_exactly(self, seven_uncovered):
        h, matching = seven_uncovered
        check = check_gamma_perfect(h, matching, 0.07)
        assert check.perfect
        assert check.ledger[0].uncovered == 7
        assert check.ledger[0].threshold == pytest.approx(7.0)

    def test_threshold_missed(self, seven_uncovered):
        h, matching = seven_uncovered
        assert not check_gamma_perfect(h, matching, 0.06).perfect

    def test_no_families(self):
        h = Hypergraph.build(4, [(0, 1)])
        assert check_gamma_perfect(h, [], 0.0).perfect

    def test_full_cover_at_gamma_zero(self):
        h = Hypergraph.build(4, [(0, 1), (2, 3)], {"all": [0, 1, 2, 3]})
        assert check_gamma_perfect(h, [0, 1], 0.0).perfect

    def test_negative_gamma(self):
        with pytest.raises(InvalidArgumentError):
            check_gamma_perfect(Hypergraph.build(2, [(0, 1)]), [], -0.1)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
    def test_monotone_in_gamma(self, g1, g2):
        low, high = sorted((g1, g2))
        h = Hypergraph.build(8, [(0, 1), (2, 3)], {"A": [0, 1, 2, 3, 4], "B": [5, 6, 7]})
        if check_gamma_perfect(h, [0], low).perfect:
            assert check_gamma_perfect(h, [0], high).perfect

    def test_report_gamma_effective(self):
        h = Hypergraph.build(4, [(0, 1)], {"all": [0, 1, 2, 3]})
        report = build_matching_report(h, [0])
        assert report.family_uncovered == {"all": 2}
        assert report.gamma_effective == pytest.approx(0.5)


@pytest.fixture
def disjoint_triples() -> Hypergraph:
    return Hypergraph.build(9, [(0, 1, 2), (3, 4, 5), (6, 7, 8)], {"all": list(range(9)), "tail": [6, 7, 8]})


@pytest.fixture
def sunflower() -> Hypergraph:
    """Four triples sharing the core vertex 0."""
    return Hypergraph.build(9, [(0, 1, 2), (0, 3, 4), (0, 5, 6), (0, 7, 8)])


class TestDegreeStats:
    def test_disjoint_edges(self, disjoint_triples):
        stats = degree_stats(disjoint_triples)
        assert (stats.min_degree, stats.max_degree, stats.max_codegree) == (1, 1, 1)

    def test_repeated_edge_raises_codegree(self):
        assert degree_stats(Hypergraph.build(4, [(0, 1, 2), (0, 1, 2)])).max_codegree == 2

    def test_matches_a_direct_recount(self):
        rng = np.random.default_rng(2)
        edges = [tuple(int(v) for v in rng.choice(100, 3, replace=False)) for _ in range(500)]
        stats = degree_stats(Hypergraph.build(100, edges))

        degrees = [sum(1 for e in edges if v in e) for v in range(100)]
        codegree = max(sum(1 for e in edges if u in e and v in e) for u, v in combinations(range(100), 2))
        assert stats.min_degree == min(degrees)
        assert stats.max_degree == max(degrees)
        assert stats.max_codegree == codegree
        assert stats.average_degree == pytest.approx(sum(degrees) / 100)


class TestSmallShapes:
    def test_disjoint_edges_are_all_matched(self, disjoint_triples):
        for report in (nibble_matching(disjoint_triples, 0.1, 10, seed=0), greedy_matching(disjoint_triples, seed=0)):
            assert report.matching == [0, 1, 2]
            assert report.family_uncovered == {"all": 0, "tail": 0}
            assert report.coverage == 1.0
        assert check_gamma_perfect(disjoint_triples, [0, 1, 2], 0.0).perfect

    @pytest.mark.parametrize("seed", range(5))
    def test_sunflower_takes_one_petal(self, sunflower, seed):
        assert len(nibble_matching(sunflower, 0.1, 10, seed=seed).matching) == 1
        assert len(greedy_matching(sunflower, seed=seed).matching) == 1


@pytest.mark.slow
class TestThirtyRegular:
    """3000 vertices, 3-uniform, degree 30, codegree at most 3.

    Edge-uniform activation gives the nibble the same law as random-order
    greedy; both leave about m^(-D/(m-1)) uncovered with m = 2(D-1), near 11.8%.
    """

    @pytest.fixture(scope="class")
    def h30(self) -> Hypergraph:
        h = random_uniform_hypergraph(3000, 3, 30, 3, seed=0)
        return Hypergraph.build(h.vertex_count, list(h.edges), {"all": list(range(3000))})

    def test_instance_shape(self, h30):
        stats = degree_stats(h30)
        assert stats.max_degree <= 30
        assert stats.max_codegree <= 3
        assert stats.average_degree > 29

    def test_nibble_coverage(self, h30):
        report = nibble_matching(h30, 0.1, 60, seed=0)
        _assert_maximal_matching(h30, report.matching)
        assert report.coverage >= 0.86
        assert report.gamma_effective == pytest.approx(1 - report.coverage)

    def test_greedy_within_fifteen_points(self, h30):
        nibble = nibble_matching(h30, 0.1, 60, seed=0)
        greedy = greedy_matching(h30, seed=0)
        assert abs(nibble.coverage - greedy.coverage) <= 0.15

    def test_nibble_keeps_up_with_greedy(self, h30):
        wins = sum(
            nibble_matching(h30, 0.1, 60, seed=s).gamma_effective
            <= greedy_matching(h30, seed=s).gamma_effective + 0.02
            for s in range(10)
        )
        assert wins >= 8
