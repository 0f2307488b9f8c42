"""Unit tests for the parameter hierarchy, derived probabilities and split tables."""

import pytest

from rainbow_decomp.pipeline.params import PipelineParams, build_params, load_params
from rainbow_decomp.utils.errors import InvalidArgumentError
from rainbow_decomp.utils.serialization import write_json


@pytest.fixture
def desk100() -> PipelineParams:
    return PipelineParams.desk_preset(100)


class TestDerivedConstants:
    """Closed forms of the probabilities and sizes."""

    def test_gadget_size_256(self):
        """k = 256 gives q_rb = η/192 and p_mc = 3072ρ."""
        p = PipelineParams.model_construct(
            n=100, eps=1e-9, gamma=1e-8, xi=1e-7, mu=1e-6, eta=0.01, eta_mc=0.002, absorber_size=256
        )
        assert p.q_rb == pytest.approx(0.01 / 192)
        assert p.p_mc == pytest.approx(3072 * 0.002)
        assert p.rho == 0.002

    def test_rho_defaults_to_eta(self, desk100):
        assert desk100.rho == desk100.eta

    def test_desk_sizes(self, desk100):
        assert desk100.sizes() == {"t": 50, "m": 1, "s": 1, "r": 4, "b": 1}

    def test_desk_regime(self, desk100):
        flags = desk100.regime_flags()
        assert all(flags.values()), {k: v for k, v in flags.items() if not v}

    @pytest.mark.parametrize("n", [2, 10, 50, 100, 200])
    def test_desk_probabilities_are_valid(self, n):
        probabilities = PipelineParams.desk_preset(n).probabilities()
        assert all(0 <= v <= 1 for v in probabilities.values())


class TestSplitTable:
    def test_every_row_is_balanced(self, desk100):
        for row in desk100.split_table():
            assert row.balanced, row.name
            assert sum(row.normalized()) == pytest.approx(1.0)

    def test_rows_and_cells(self, desk100):
        rows = {row.name: row for row in desk100.split_table()}
        assert set(rows) == {"vertices", "U", "B", "colours", "C_1", "edges", "G_1"}
        assert [name for name, _ in rows["vertices"].cells] == ["U", "V_tilde", "V_circ", "A", "B"]
        assert rows["B"].cells == [("B_1", desk100.mu / 2), ("B_2", desk100.mu / 2)]

    def test_nested_parents_match_cells(self, desk100):
        rows = {row.name: row for row in desk100.split_table()}
        for child in ("U", "B"):
            assert rows[child].parent_weight == pytest.approx(dict(rows["vertices"].cells)[child])
        assert rows["C_1"].parent_weight == pytest.approx(dict(rows["colours"].cells)["C_1"])
        assert rows["G_1"].parent_weight == pytest.approx(dict(rows["edges"].cells)["G_1"])


class TestIdentityChecks:
    def test_identities_hold_on_the_preset(self, desk100):
        checks = {c.name: c for c in desk100.identity_checks()}
        assert checks["q_circ2"].ok
        assert checks["q_circ2"].target == pytest.approx(desk100.eta / 12 - desk100.mu)
        assert checks["beta_circ2"].ok
        assert checks["q_tri_lower"].ok and checks["beta_tri_lower"].ok

    def test_summary_shape(self, desk100):
        summary = desk100.summary()
        assert set(summary) == {"inputs", "sizes", "probabilities", "regime"}
        assert summary["inputs"]["absorber_size"] == 4


class TestConstruction:
    def test_odd_n(self):
        with pytest.raises(InvalidArgumentError):
            build_params(n=7, eps=1e-14, gamma=1e-13, xi=1e-12, mu=3e-4, eta=5e-3, absorber_size=4)

    def test_probability_out_of_range(self):
        """η = 0.5 with k = 4 puts p_mc at 24."""
        with pytest.raises(InvalidArgumentError) as exc_info:
            build_params(n=10, eps=1e-4, gamma=1e-3, xi=1e-2, mu=0.1, eta=0.5, absorber_size=4)
        assert "p_mc" in exc_info.value.message or exc_info.value.locations

    def test_load_fills_n(self, tmp_path):
        path = tmp_path / "p.json"
        write_json(path, {"eps": 1e-14, "gamma": 1e-13, "xi": 1e-12, "mu": 3e-4, "eta": 5e-3, "absorber_size": 4})
        assert load_params(path, 20).n == 20

    def test_load_rejects_conflicting_n(self, tmp_path):
        path = tmp_path / "p.json"
        write_json(path, {"n": 10, "eps": 1e-14, "gamma": 1e-13, "xi": 1e-12, "mu": 3e-4, "eta": 5e-3})
        with pytest.raises(InvalidArgumentError):
            load_params(path, 20)
