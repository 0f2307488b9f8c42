"""Standardized error handling for rainbow-decomp.

This module provides:
1. Custom exception classes for the failure modes of every component
2. Standardized error response models (what the CLI prints on stderr)
3. Conversion helpers from pydantic and unexpected exceptions
4. Integration with structured logging

Every error carries an ``exit_code`` following the CLI contract:
1 for verification failures and refutations, 2 for exhausted budgets,
3 for invalid input.
"""

import traceback
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.utils.logging import get_logger

# Set up logging
logger = get_logger(__name__)


# --- Error Response Models ---

class ErrorLocation(BaseModel):
    """Location of an error (field name, array position, etc.)."""

    field: str
    message: str


class ErrorResponse(BaseModel):
    """Standardized error response model."""

    status: str = "error"
    code: int = Field(..., description="Process exit code")
    message: str = Field(..., description="Human-readable error message")
    error_type: str = Field(..., description="Error classification")
    details: Optional[Dict[str, Any]] = Field(None, description="Additional error details")
    locations: Optional[List[ErrorLocation]] = Field(None, description="Error locations (for invalid input)")
    traceback: Optional[List[str]] = Field(None, description="Stack trace (only in development)")


# --- Custom Exception Classes ---

class RainbowError(Exception):
    """Base exception for all rainbow-decomp errors."""

    exit_code: int = 1
    error_type: str = "internal_error"
    message: str = "An unexpected error occurred"

    def __init__(
        self,
        message: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        locations: Optional[List[ErrorLocation]] = None
    ):
        self.message = message or self.message
        self.details = details
        self.locations = locations
        super().__init__(self.message)


class InvalidArgumentError(RainbowError):
    """A precondition on the arguments of an operation does not hold."""

    exit_code = 3
    error_type = "invalid_argument"
    message = "Invalid argument"


class InvalidInstanceError(InvalidArgumentError):
    """An input file does not describe a valid object; carries positions."""

    error_type = "invalid_instance"
    message = "Invalid instance"


class RefutationError(RainbowError):
    """A certificate of impossibility was found (e.g. a Hall violator)."""

    exit_code = 1
    error_type = "refutation"
    message = "Refuted"


class InfeasibleError(RainbowError):
    """The requested construction cannot be realized for this input."""

    exit_code = 1
    error_type = "infeasible"
    message = "Construction infeasible"


class EmbedStuckError(RainbowError):
    """Greedy embedding ran out of candidate vertices."""

    exit_code = 1
    error_type = "embed_stuck"
    message = "Greedy embedding got stuck"


class InternalInconsistencyError(RainbowError):
    """An audit of our own output failed; indicates a bug."""

    exit_code = 1
    error_type = "internal_inconsistency"
    message = "Internal consistency audit failed"


class BudgetExceededError(RainbowError):
    """An exhaustive computation would exceed its combinatorial budget."""

    exit_code = 2
    error_type = "budget_exceeded"
    message = "Combinatorial budget exceeded"


class RetryExhaustedError(RainbowError):
    """A restart-based sampler used up all of its restarts."""

    exit_code = 2
    error_type = "retry_exhausted"
    message = "Retry budget exhausted"


class SearchFailedError(RainbowError):
    """A randomized search found no verified candidate within budget."""

    exit_code = 2
    error_type = "search_failed"
    message = "Search failed within budget"


class NotFoundError(RainbowError):
    """A search ended without an answer; existence is not disproved."""

    exit_code = 2
    error_type = "not_found"
    message = "Not found within budget"


class PartialResultError(RainbowError):
    """A sequential routine stopped early; details carry the completed prefix."""

    exit_code = 2
    error_type = "partial_result"
    message = "Routine stopped with a partial result"


class ExhaustedError(RainbowError):
    """A time-budgeted search ran out of time (not a refutation)."""

    exit_code = 2
    error_type = "exhausted"
    message = "Time budget exhausted"


# --- Conversion helpers ---

def from_pydantic_error(
    exc: PydanticValidationError,
    prefix: str,
    error_cls: type[InvalidArgumentError] = InvalidArgumentError,
    parameters: Optional[Dict[str, Any]] = None,
) -> InvalidArgumentError:
    """Convert a pydantic validation failure into an InvalidArgumentError.

    Args:
        exc: The pydantic error
        prefix: Leading text of the message
        error_cls: Concrete error class to build
        parameters: Raw inputs, echoed in details

    Returns:
        The converted error (not raised)
    """
    error_details = exc.errors(include_url=False)
    error_messages = []
    locations = []
    for error in error_details:
        loc = error.get("loc", ())
        msg = error.get("msg", "")
        field = ".".join(str(part) for part in loc) if loc else "__root__"
        error_messages.append(f"{field}: {msg}")
        locations.append(ErrorLocation(field=field, message=msg))

    details: Dict[str, Any] = {
        "validation_errors": [
            {"loc": [str(part) for part in e.get("loc", ())], "msg": e.get("msg", "")}
            for e in error_details
        ]
    }
    if parameters is not None:
        details["parameters"] = parameters

    return error_cls(
        message=f"{prefix}: " + "; ".join(error_messages),
        details=details,
        locations=locations,
    )


def wrap_unexpected(exc: Exception) -> RainbowError:
    """Convert a foreign exception into a RainbowError."""
    if isinstance(exc, RainbowError):
        return exc
    return RainbowError(
        message=f"Unexpected error: {str(exc)}",
        details={"error_class": exc.__class__.__name__},
    )


def create_error_response(
    exc: RainbowError,
    include_traceback: bool = False
) -> ErrorResponse:
    """Create standardized error response from exception."""
    tb = None
    if include_traceback:
        tb = traceback.format_exception(type(exc), exc, exc.__traceback__)

    return ErrorResponse(
        code=exc.exit_code,
        message=exc.message,
        error_type=exc.error_type,
        details=exc.details,
        locations=exc.locations,
        traceback=tb
    )


def handle_error(exc: Exception, include_traceback: bool = False) -> ErrorResponse:
    """Log an error with context and build its response.

    Unexpected exceptions are converted first so that every failure leaves
    the process with a classified exit code.
    """
    custom_exc = wrap_unexpected(exc)

    log_context: Dict[str, Any] = {
        "error_type": custom_exc.error_type,
        "exit_code": custom_exc.exit_code,
    }
    if custom_exc.details:
        log_context["details"] = custom_exc.details

    logger.error(
        f"Command failed: {custom_exc.message}",
        **log_context,
        exc_info=include_traceback
    )

    return create_error_response(custom_exc, include_traceback=include_traceback)


__all__ = [
    "ErrorLocation",
    "ErrorResponse",
    "RainbowError",
    "InvalidArgumentError",
    "InvalidInstanceError",
    "RefutationError",
    "InfeasibleError",
    "EmbedStuckError",
    "InternalInconsistencyError",
    "BudgetExceededError",
    "RetryExhaustedError",
    "SearchFailedError",
    "NotFoundError",
    "PartialResultError",
    "ExhaustedError",
    "from_pydantic_error",
    "wrap_unexpected",
    "create_error_response",
    "handle_error",
]
