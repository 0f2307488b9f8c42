"""Unit tests for the structlog configuration and run context variables."""

import orjson
import pytest
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.utils.logging import (
    LogConfig,
    add_context_vars,
    bind_component,
    bind_instance,
    bind_run_id,
    bind_seed,
    clear_context,
    get_logger,
    setup_logging,
)


@pytest.fixture
def restore_logging():
    yield
    setup_logging()


class TestLogConfig:
    @pytest.mark.parametrize("given,level", [("debug", "DEBUG"), ("Info", "INFO"), ("error", "ERROR"), ("WARNING", "WARNING")])
    def test_levels_are_normalized(self, given, level):
        assert LogConfig(LOG_LEVEL=given).LOG_LEVEL == level

    def test_unknown_level(self):
        with pytest.raises(PydanticValidationError):
            LogConfig(LOG_LEVEL="chatty")


class TestContextVars:
    def test_bound_values_are_added(self):
        bind_run_id("rmbg-search")
        bind_component("rmbg")
        bind_seed(7)
        bind_instance("h.json")
        event = add_context_vars(None, "info", {"event": "x"})
        assert event == {
            "event": "x",
            "run_id": "rmbg-search",
            "component": "rmbg",
            "seed": "7",
            "instance": "h.json",
        }

    def test_explicit_keys_win(self):
        bind_component("rmbg")
        assert add_context_vars(None, "info", {"component": "trees"})["component"] == "trees"

    def test_clear_context(self):
        bind_seed(3)
        bind_instance("g.json")
        clear_context()
        assert add_context_vars(None, "info", {}) == {}


class TestRendering:
    def test_json_logs_go_to_stderr(self, capsys, restore_logging):
        setup_logging(LogConfig(JSON_LOGS=True))
        bind_component("nibble")
        get_logger("rainbow_decomp.test").info("Matching computed", coverage=0.5, operation="test")
        captured = capsys.readouterr()
        assert captured.out == ""
        record = orjson.loads(captured.err.strip().splitlines()[-1])
        assert record["event"] == "Matching computed"
        assert record["coverage"] == 0.5
        assert record["component"] == "nibble"
        assert record["level"] == "info"

    def test_level_filters_records(self, capsys, restore_logging):
        setup_logging(LogConfig(LOG_LEVEL="error"))
        get_logger("rainbow_decomp.test").info("quiet")
        assert "quiet" not in capsys.readouterr().err

    def test_initial_values_are_bound(self, capsys, restore_logging):
        setup_logging(LogConfig(JSON_LOGS=True))
        get_logger("rainbow_decomp.test", solver="exact").warning("Budget low")
        record = orjson.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["solver"] == "exact"
