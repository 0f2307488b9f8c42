"""Centralized logging configuration for rainbow-decomp.

This module sets up a structured logging system using structlog so that every
component (solver, nibble, embedding, pipeline) logs with the same shape. It
provides:

1. Development and production logging configurations
2. Context variables for run tracking (run id, component, seed, instance)
3. Structured log output (pretty in dev, JSON in prod)

Logs are written to stderr; stdout is reserved for CLI artifacts.
"""

import logging
import sys
from contextvars import ContextVar
from typing import Any, Optional

import structlog
from pydantic import BaseModel, field_validator
from structlog.types import EventDict, WrappedLogger

# Context variables to store run-specific data
run_id: ContextVar[str] = ContextVar("run_id", default="")
component: ContextVar[str] = ContextVar("component", default="")
seed: ContextVar[str] = ContextVar("seed", default="")
instance: ContextVar[str] = ContextVar("instance", default="")

_LEVEL_ALIASES = {
    "error": "ERROR",
    "warning": "WARNING",
    "info": "INFO",
    "debug": "DEBUG",
}


class LogConfig(BaseModel):
    """Logging configuration model."""

    # General settings
    ENVIRONMENT: str = "development"
    LOG_LEVEL: str = "INFO"
    JSON_LOGS: bool = False

    # Log format settings
    CONSOLE_LOG_FORMAT: str = "%(message)s"
    JSON_LOG_FORMAT: str = "%(message)s"

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        """Accept the lower-case spellings used by RAINBOW_LOG."""
        level = _LEVEL_ALIASES.get(v.lower(), v.upper())
        if level not in {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}:
            raise ValueError(f"Unknown log level '{v}'")
        return level


def setup_logging(config: Optional[LogConfig] = None) -> None:
    """
    Set up structured logging for the library and CLI.

    Args:
        config: Optional logging configuration
    """
    if config is None:
        config = LogConfig()

    renderer: Any
    if config.JSON_LOGS or config.ENVIRONMENT.lower() == "production":
        renderer = structlog.processors.JSONRenderer()
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            add_context_vars,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    # Configure standard logging to work with structlog
    logging.basicConfig(
        format=config.CONSOLE_LOG_FORMAT if not config.JSON_LOGS else config.JSON_LOG_FORMAT,
        level=config.LOG_LEVEL,
        stream=sys.stderr,
        force=True,
    )


def add_context_vars(
    logger: WrappedLogger, method_name: str, event_dict: EventDict
) -> EventDict:
    """
    Add context variables to log events.

    Args:
        logger: The wrapped logger
        method_name: The method being called
        event_dict: The event dictionary

    Returns:
        EventDict with added context
    """
    for name, var in (
        ("run_id", run_id),
        ("component", component),
        ("seed", seed),
        ("instance", instance),
    ):
        value = var.get()
        if value:
            event_dict.setdefault(name, value)

    return event_dict


def get_logger(name: Optional[str] = None, **initial_values: Any) -> structlog.stdlib.BoundLogger:
    """
    Get a configured logger with optional initial values.

    Args:
        name: Logger name (usually module name)
        **initial_values: Initial values to bind to the logger

    Returns:
        Configured structlog logger
    """
    logger = structlog.get_logger(name)

    if initial_values:
        logger = logger.bind(**initial_values)

    return logger


def bind_run_id(value: str) -> None:
    """Bind the run identifier to the current context."""
    run_id.set(value)


def bind_component(comp_name: str) -> None:
    """
    Bind component name to the current context.

    Args:
        comp_name: Component name to bind
    """
    component.set(comp_name)


def bind_seed(value: int) -> None:
    """Bind the root seed of the current run."""
    seed.set(str(value))


def bind_instance(value: str) -> None:
    """Bind the instance path or label being processed."""
    instance.set(value)


def clear_context() -> None:
    """Clear all context variables."""
    run_id.set("")
    component.set("")
    seed.set("")
    instance.set("")


# Initialize logging on module import
setup_logging()


__all__ = [
    "LogConfig",
    "setup_logging",
    "add_context_vars",
    "get_logger",
    "bind_run_id",
    "bind_component",
    "bind_seed",
    "bind_instance",
    "clear_context",
]
