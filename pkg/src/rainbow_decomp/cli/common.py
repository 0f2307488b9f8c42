"""Shared plumbing for the command handlers: run configuration, output and exit codes."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.settings import get_settings
from rainbow_decomp.utils.errors import InvalidArgumentError, from_pydantic_error, handle_error
from rainbow_decomp.utils.logging import LogConfig, bind_run_id, bind_seed, get_logger, setup_logging
from rainbow_decomp.utils.serialization import dumps, write_json

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1

_BUDGET_UNITS = {"s": 1.0, "m": 60.0, "h": 3600.0}


class RunConfig(BaseModel):
    """Validated view of the options every command shares."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str = Field(..., min_length=1, description="Command path, e.g. 'rmbg search'")
    instances: List[str] = Field(default_factory=list, description="Input file paths")
    seed: int = Field(default=0, ge=0)
    budget: Optional[float] = Field(default=None, gt=0, description="Time budget in seconds")
    attempts: Optional[int] = Field(default=None, gt=0, description="Attempt or switch budget")
    out: Optional[str] = None
    params: Optional[str] = None
    overrides: Dict[str, float] = Field(default_factory=dict)

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        """Collect the shared options from a parsed namespace.

        Raises:
            InvalidArgumentError: If a shared option fails validation
        """
        values: Dict[str, Any] = {
            "command": " ".join(p for p in (args.command, getattr(args, "action", None)) if p),
            "instances": [p for p in (getattr(args, "file", None), getattr(args, "instance", None)) if p],
            "seed": getattr(args, "seed", 0),
            "budget": getattr(args, "budget", None),
            "attempts": getattr(args, "attempts", None),
            "out": getattr(args, "out", None),
            "params": getattr(args, "params", None),
            "overrides": collect_overrides(getattr(args, "overrides", None)),
        }
        try:
            return cls(**values)
        except PydanticValidationError as e:
            raise from_pydantic_error(e, "Invalid options", parameters=values)


def parse_budget(text: str) -> float:
    """Parse ``60``, ``60s``, ``2m`` or ``1h`` into seconds."""
    raw = text.strip().lower()
    unit = 1.0
    if raw and raw[-1] in _BUDGET_UNITS:
        unit = _BUDGET_UNITS[raw[-1]]
        raw = raw[:-1]
    try:
        return float(raw) * unit
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid budget '{text}' (expected e.g. 60s)")


def parse_override(text: str) -> tuple:
    """Parse ``name=value`` for parameter overrides."""
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected name=value, got '{text}'")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of '{name}' is not a number: '{value}'")


def collect_overrides(pairs: Optional[List[tuple]]) -> Dict[str, float]:
    return dict(pairs or [])


def configure_logging() -> None:
    """Configure structlog from RAINBOW_LOG and the environment settings."""
    settings = get_settings()
    setup_logging(
        LogConfig(
            ENVIRONMENT=settings.environment,
            LOG_LEVEL=settings.log,
            JSON_LOGS=settings.json_logs,
        )
    )


def begin_run(config: RunConfig) -> None:
    bind_run_id(config.command.replace(" ", "-"))
    bind_seed(config.seed)
    logger.debug("Command started", command=config.command, seed=config.seed, operation="begin_run")


def emit(payload: Any, out: Optional[str] = None) -> None:
    """Write a JSON artifact to ``out``, or to stdout when no path is given."""
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        write_json(out, payload)
        logger.info("Artifact written", path=out, operation="emit")
        return
    sys.stdout.buffer.write(dumps(payload))
    sys.stdout.flush()


def note(message: str) -> None:
    """Human-readable diagnostic line on stderr."""
    print(message, file=sys.stderr)


def exit_code_for(exc: Exception) -> int:
    """Log the failure, print a diagnostic and return the process exit code."""
    include_traceback = get_settings().log == "debug"
    response = handle_error(exc, include_traceback=include_traceback)
    note(f"error[{response.error_type}]: {response.message}")
    for location in response.locations or []:
        note(f"  at {location.field}: {location.message}")
    return response.code


def require(condition: bool, message: str, **details: Any) -> None:
    """Raise InvalidArgumentError unless ``condition`` holds."""
    if not condition:
        raise InvalidArgumentError(message=message, details=details or None)


__all__ = [
    "EXIT_OK",
    "EXIT_FAILED",
    "RunConfig",
    "parse_budget",
    "parse_override",
    "configure_logging",
    "begin_run",
    "emit",
    "note",
    "exit_code_for",
    "require",
]
