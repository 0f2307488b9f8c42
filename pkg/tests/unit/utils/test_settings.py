"""Environment-driven settings."""

import pytest
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.settings import BudgetSettings, RainbowSettings, get_settings


class TestRainbowSettings:
    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("RAINBOW_LOG", raising=False)
        settings = RainbowSettings(_env_file=None)
        assert settings.log == "info"
        assert settings.budgets.solver_time_budget == 60.0
        assert settings.budgets.rmbg_search_attempts == 1000

    def test_log_level_from_environment(self, monkeypatch):
        monkeypatch.setenv("RAINBOW_LOG", "DEBUG")
        assert RainbowSettings(_env_file=None).log == "debug"

    def test_unknown_log_level(self, monkeypatch):
        monkeypatch.setenv("RAINBOW_LOG", "verbose")
        with pytest.raises(PydanticValidationError):
            RainbowSettings(_env_file=None)

    def test_nested_budget_override(self, monkeypatch):
        monkeypatch.setenv("RAINBOW_BUDGETS__SOLVER_TIME_BUDGET", "5")
        assert RainbowSettings(_env_file=None).budgets.solver_time_budget == 5.0

    def test_get_settings_is_cached(self):
        assert get_settings() is get_settings()


class TestBudgetSettings:
    @pytest.mark.parametrize("field", ["sampled_draws", "switch_budget", "embedding_retries"])
    def test_budgets_must_be_positive(self, field):
        with pytest.raises(PydanticValidationError):
            BudgetSettings(**{field: 0})
