"""Unit tests for the toy-scale absorber demonstrations."""

import pytest

from rainbow_decomp.core.factorization import generate_circle_factorization
from rainbow_decomp.core.predicates import is_rainbow
from rainbow_decomp.pipeline.absorbers import (
    build_absorber_demo,
    build_colour_absorber_demo,
    build_edge_absorber_demo,
)
from rainbow_decomp.utils.errors import InvalidArgumentError


class TestEdgeAbsorber:
    """Three trees, one RMBG(3, 2, 2) per absorbed colour."""

    @pytest.fixture(scope="class")
    def demo(self):
        return build_edge_absorber_demo(blocks=3, matching_size=4, seed=0)

    def test_audit_passes(self, demo):
        assert demo.ok, demo.failures
        assert demo.kind == "edge"

    def test_every_completion_and_absorption_is_checked(self, demo):
        assert demo.completions_checked == 3 * 4**3
        assert demo.absorptions_checked == 2**3

    def test_structure(self, demo):
        assert len(demo.forests) == 3
        assert len(demo.matchings) == 9
        assert all(len(am.edges) == 4 for am in demo.matchings)
        assert [len(pool.reservoir) for pool in demo.pools] == [2, 2, 2]
        assert [len(pool.buffer) for pool in demo.pools] == [2, 2, 2]

    def test_forests_are_rainbow(self, demo):
        g = generate_circle_factorization(demo.n)
        for forest in demo.forests:
            assert is_rainbow(g, forest)

    def test_small_matchings(self):
        demo = build_edge_absorber_demo(blocks=2, matching_size=3, seed=1)
        assert demo.ok, demo.failures
        assert demo.completions_checked == 3 * 3**2

    @pytest.mark.parametrize(
        "blocks,matching_size,m",
        [(0, 4, 1), (7, 4, 1), (3, 0, 1), (3, 5, 1), (3, 4, 3)],
    )
    def test_outside_toy_scale(self, blocks, matching_size, m):
        with pytest.raises(InvalidArgumentError):
            build_edge_absorber_demo(blocks=blocks, matching_size=matching_size, m=m)


class TestColourAbsorber:
    @pytest.mark.parametrize("s,subsets", [(1, 2), (2, 6)])
    def test_every_subset_is_absorbed(self, s, subsets):
        demo = build_colour_absorber_demo(s=s, seed=0)
        assert demo.ok, demo.failures
        assert demo.completions_checked == subsets
        assert demo.absorptions_checked == subsets
        assert len(demo.reservoir_colours) == len(demo.buffer_colours) == 2 * s
        assert not set(demo.reservoir_colours) & set(demo.buffer_colours)

    @pytest.mark.parametrize("s", [0, 4])
    def test_outside_toy_scale(self, s):
        with pytest.raises(InvalidArgumentError):
            build_colour_absorber_demo(s=s)


class TestDispatch:
    def test_kinds(self):
        assert build_absorber_demo("colour", 1).kind == "colour"
        assert build_absorber_demo("edge", 2).kind == "edge"

    def test_unknown_kind(self):
        with pytest.raises(InvalidArgumentError):
            build_absorber_demo("vertex", 1)
