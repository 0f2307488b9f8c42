"""Unit tests for 1-factorization generation, verification and signatures."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.core.factorization import (
    factorization_signature,
    generate_circle_factorization,
    generate_random_factorization,
    permute_vertices,
    verify_factorization,
)
from rainbow_decomp.models import EdgeColouredKn, edge_count, edge_from_index, edge_index
from rainbow_decomp.utils.errors import InvalidArgumentError


class TestEdgeIndex:
    """Flat upper-triangular edge indexing."""

    @pytest.mark.parametrize("n", [2, 3, 7, 30])
    def test_index_is_a_bijection(self, n):
        """Every edge maps to a distinct index in [0, C(n,2)) and back."""
        seen = set()
        for u in range(n):
            for v in range(u + 1, n):
                k = edge_index(n, u, v)
                assert 0 <= k < edge_count(n)
                assert edge_from_index(n, k) == (u, v)
                seen.add(k)
        assert len(seen) == edge_count(n)

    def test_index_ignores_orientation(self):
        assert edge_index(10, 7, 2) == edge_index(10, 2, 7)


class TestCircleFactorization:
    """Round-robin construction."""

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 50, 100, 200])
    def test_circle_is_valid(self, n):
        """The circle method yields a 1-factorization for every even n."""
        g = generate_circle_factorization(n)
        assert g.n == n
        assert verify_factorization(g) == []

    def test_k4_layout(self, k4):
        """Edges (0,1),(0,2),(0,3),(1,2),(1,3),(2,3) receive colours 2,1,0,0,1,2."""
        assert k4.colours == (2, 1, 0, 0, 1, 2)

    @pytest.mark.parametrize("n", [0, 3, 7, -2])
    def test_rejects_odd_or_small_n(self, n):
        with pytest.raises(InvalidArgumentError) as exc_info:
            generate_circle_factorization(n)
        assert exc_info.value.exit_code == 3


class TestRandomFactorization:
    """Randomized backtracking sampler."""

    @pytest.mark.parametrize("n", [6, 8, 10])
    def test_outputs_are_valid(self, n):
        for seed in range(20):
            assert verify_factorization(generate_random_factorization(n, seed)) == []

    def test_deterministic_per_seed(self):
        a = generate_random_factorization(10, 42)
        b = generate_random_factorization(10, 42)
        assert a.colours == b.colours

    def test_k8_has_several_classes(self, k8):
        """Sampling K_8 reaches more than one isomorphism class."""
        signatures = {factorization_signature(generate_random_factorization(8, s)) for s in range(30)}
        signatures.add(factorization_signature(k8))
        assert len(signatures) >= 2

    def test_rejects_odd_n(self):
        with pytest.raises(InvalidArgumentError):
            generate_random_factorization(9, 0)


class TestVerifyFactorization:
    """Violation listing for defective colourings."""

    def test_repeated_colour_is_reported(self):
        """Recolouring (0,1) with colour 0 breaks classes 0 and 2."""
        g = EdgeColouredKn(n=4, colours=(0, 1, 0, 0, 1, 2))
        violations = verify_factorization(g)
        repeats = {(v.colour, v.vertex) for v in violations if v.kind == "vertex-repeat"}
        sizes = {(v.colour, v.observed) for v in violations if v.kind == "class-size"}
        assert repeats == {(0, 0), (0, 1)}
        assert sizes == {(0, 3), (2, 1)}

    def test_missing_colour_is_reported(self):
        g = EdgeColouredKn(n=4, colours=(0, 1, 1, 1, 1, 0))
        kinds = {v.kind for v in verify_factorization(g)}
        assert "colour-count" in kinds

    def test_structural_errors_raise_at_construction(self):
        with pytest.raises(PydanticValidationError):
            EdgeColouredKn(n=5, colours=tuple([0] * 10))
        with pytest.raises(PydanticValidationError):
            EdgeColouredKn(n=4, colours=(0, 1, 2))
        with pytest.raises(PydanticValidationError):
            EdgeColouredKn(n=4, colours=(0, 1, 2, 3, 1, 2))


class TestSignature:
    """Isomorphism invariant."""

    def test_k4_signature(self, k4):
        """Any two colour classes of K_4 form a 4-cycle."""
        assert factorization_signature(k4) == ((4,), (4,), (4,))

    def test_partitions_cover_all_vertices(self, k10):
        for partition in factorization_signature(k10):
            assert sum(partition) == 10
            assert all(length % 2 == 0 for length in partition)

    @settings(max_examples=30, deadline=None)
    @given(st.permutations(list(range(8))))
    def test_invariant_under_relabelling(self, perm):
        g = generate_circle_factorization(8)
        h = permute_vertices(g, perm)
        assert verify_factorization(h) == []
        assert factorization_signature(h) == factorization_signature(g)

    def test_permutation_must_be_bijective(self, k4):
        with pytest.raises(InvalidArgumentError):
            permute_vertices(k4, [0, 0, 1, 2])
