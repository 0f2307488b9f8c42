"""orjson helpers shared by every file format.

All artifacts are written with sorted keys and two-space indentation so that
identical invocations produce identical bytes.
"""

from pathlib import Path
from typing import Any, Union

import orjson

from rainbow_decomp.utils.errors import ErrorLocation, InvalidInstanceError

_DUMP_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_NON_STR_KEYS


def dumps(payload: Any) -> bytes:
    """Serialize ``payload`` deterministically (trailing newline included)."""
    return orjson.dumps(payload, option=_DUMP_OPTIONS) + b"\n"


def loads(raw: Union[bytes, str], source: str = "<memory>") -> Any:
    """Parse JSON, reporting decoder failures as invalid instances."""
    try:
        return orjson.loads(raw)
    except orjson.JSONDecodeError as e:
        raise InvalidInstanceError(
            message=f"Malformed JSON in {source}: {e}",
            details={"source": source},
            locations=[ErrorLocation(field=f"char {e.pos}", message=e.msg)],
        )


def read_json(path: Union[str, Path]) -> Any:
    """Read and parse a JSON file."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise InvalidInstanceError(
            message=f"Cannot read {path}: {e.strerror}",
            details={"source": str(path)},
        )
    return loads(raw, source=str(path))


def write_json(path: Union[str, Path], payload: Any) -> None:
    """Write ``payload`` to ``path`` deterministically."""
    Path(path).write_bytes(dumps(payload))


def expect_mapping(data: Any, source: str) -> dict:
    """Reject top-level JSON values that are not objects."""
    if not isinstance(data, dict):
        raise InvalidInstanceError(
            message=f"Expected a JSON object in {source}",
            locations=[ErrorLocation(field="$", message=f"got {type(data).__name__}")],
        )
    return data


__all__ = ["dumps", "loads", "read_json", "write_json", "expect_mapping"]
