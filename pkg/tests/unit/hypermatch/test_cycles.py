"""Unit tests for the rainbow-cycle hypergraph and matching decoding."""

from itertools import combinations

import pytest

from rainbow_decomp.hypermatch.cycles import (
    CycleLayout,
    SampledEnumeration,
    build_cycle_hypergraph,
    extract_disjoint_families,
)
from rainbow_decomp.hypermatch.matching import nibble_matching
from rainbow_decomp.models import EdgeSet, edge_index
from rainbow_decomp.utils.errors import BudgetExceededError, InternalInconsistencyError, InvalidArgumentError


def _rainbow_four_cycles(g, vertices):
    """Brute-force count of rainbow 4-cycles on ``vertices``."""
    count = 0
    for a, b, c, d in combinations(sorted(vertices), 4):
        for cycle in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            colours = {g.colour_of(cycle[j], cycle[(j + 1) % 4]) for j in range(4)}
            count += len(colours) == 4
    return count


class TestCycleLayout:
    def test_vertex_count(self):
        layout = CycleLayout(n=6, t=2, length=3)
        assert layout.vertex_count == 15 + 12 + 10

    @pytest.mark.parametrize("i,v", [(0, 0), (1, 5), (1, 0)])
    def test_vertex_ids_decode(self, i, v):
        layout = CycleLayout(n=6, t=2, length=3)
        assert layout.decode(layout.vertex_id(i, v)) == ("vertex", i, v)

    @pytest.mark.parametrize("i,c", [(0, 0), (1, 4)])
    def test_colour_ids_decode(self, i, c):
        layout = CycleLayout(n=6, t=2, length=3)
        assert layout.decode(layout.colour_id(i, c)) == ("colour", i, c)

    def test_edge_ids_decode(self):
        layout = CycleLayout(n=6, t=2, length=3)
        assert layout.decode(edge_index(6, 2, 4)) == ("edge", edge_index(6, 2, 4), -1)


class TestBuildCycleHypergraph:
    """One hyperedge per rainbow cycle per index."""

    def test_k4_triangles(self, k4):
        ch = build_cycle_hypergraph(k4, [range(4)], [range(3)], 3)
        assert ch.hypergraph.edge_count == 4
        assert ch.hypergraph.uniformity() == 9

    def test_k6_triangles_per_index(self, k6):
        ch = build_cycle_hypergraph(k6, [range(6), range(6)], [range(5), range(5)], 3)
        assert ch.hypergraph.edge_count == 2 * 20

    def test_k6_four_cycles_match_brute_force(self, k6):
        ch = build_cycle_hypergraph(k6, [range(6)], [range(5)], 4)
        assert ch.hypergraph.edge_count == _rainbow_four_cycles(k6, range(6))
        assert ch.hypergraph.uniformity() == 12

    def test_colour_restriction(self, k4):
        """A single allowed colour admits no triangle."""
        ch = build_cycle_hypergraph(k4, [range(4)], [[0]], 3)
        assert ch.hypergraph.edge_count == 0
        assert "colours[0]" in ch.hypergraph.families

    def test_empty_vertex_set(self, k4):
        ch = build_cycle_hypergraph(k4, [[]], [range(3)], 3)
        assert ch.hypergraph.edge_count == 0
        assert "vertices[0]" not in ch.hypergraph.families

    def test_families(self, k4):
        ch = build_cycle_hypergraph(k4, [[0, 1, 2], [1, 2, 3]], [[0, 1, 2], [0, 1]], 3)
        families = ch.hypergraph.families
        assert len(families["vertex-incidence[1]"]) == 2
        assert len(families["vertex-incidence[0]"]) == 1
        assert len(families["colour-incidence[2]"]) == 1
        assert len(families["colours[1]"]) == 2

    def test_host_restriction(self, k6):
        host = EdgeSet.of(6, [(u, v) for u in range(6) for v in range(u + 1, 6) if (u, v) != (0, 1)])
        ch = build_cycle_hypergraph(k6, [range(6)], [range(5)], 3, host=host)
        forbidden = edge_index(6, 0, 1)
        assert ch.hypergraph.edge_count == 16
        assert all(forbidden not in e for e in ch.hypergraph.edges)

    def test_sampled_is_subset_of_exhaustive(self, k8):
        exhaustive = build_cycle_hypergraph(k8, [range(8)], [range(7)], 4)
        sampled = build_cycle_hypergraph(k8, [range(8)], [range(7)], 4, SampledEnumeration(walks=200, seed=1))
        assert 0 < sampled.hypergraph.edge_count <= exhaustive.hypergraph.edge_count
        assert set(sampled.hypergraph.edges) <= set(exhaustive.hypergraph.edges)

    def test_long_exhaustive_cycles_exceed_budget(self, k8):
        with pytest.raises(BudgetExceededError) as exc_info:
            build_cycle_hypergraph(k8, [range(8)], [range(7)], 6)
        assert exc_info.value.exit_code == 2

    def test_long_sampled_cycles_are_allowed(self, k8):
        ch = build_cycle_hypergraph(k8, [range(8)], [range(7)], 6, SampledEnumeration(walks=50))
        assert all(len(e) == 18 for e in ch.hypergraph.edges)

    def test_bad_arguments(self, k4):
        with pytest.raises(InvalidArgumentError):
            build_cycle_hypergraph(k4, [range(4)], [], 3)
        with pytest.raises(InvalidArgumentError):
            build_cycle_hypergraph(k4, [range(4)], [range(3)], 2)


class TestExtractDisjointFamilies:
    """Decoding matchings back to cycle families."""

    def test_empty_matching(self, k4):
        ch = build_cycle_hypergraph(k4, [range(4), range(4)], [range(3), range(3)], 3)
        assert extract_disjoint_families(k4, ch, []) == [[], []]

    def test_single_triangle(self, k4):
        ch = build_cycle_hypergraph(k4, [range(4)], [range(3)], 3)
        [[cycle]] = extract_disjoint_families(k4, ch, [0])
        assert cycle.index == 0
        assert len(set(cycle.colours)) == 3
        assert sorted(cycle.colours) == [0, 1, 2]
        for (u, v), c in zip(cycle.edges(), cycle.colours):
            assert k4.colour_of(u, v) == c

    def test_nibble_output_decodes(self, k10):
        ch = build_cycle_hypergraph(k10, [range(10), range(10)], [range(9), range(9)], 3)
        report = nibble_matching(ch.hypergraph, 0.1, 20, seed=3)
        families = extract_disjoint_families(k10, ch, report.matching)
        assert sum(len(f) for f in families) == len(report.matching)
        all_edges = [e for f in families for cycle in f for e in cycle.edges()]
        assert len(all_edges) == len(set(all_edges))
        for f in families:
            vertices = [v for cycle in f for v in cycle.vertices]
            colours = [c for cycle in f for c in cycle.colours]
            assert len(vertices) == len(set(vertices))
            assert len(colours) == len(set(colours))

    def test_shared_edge_is_caught(self, k4):
        """The same triangle chosen at two indices shares all of its edges."""
        ch = build_cycle_hypergraph(k4, [range(4), range(4)], [range(3), range(3)], 3)
        with pytest.raises(InternalInconsistencyError):
            extract_disjoint_families(k4, ch, [0, 4])
