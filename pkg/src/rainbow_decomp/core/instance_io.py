"""JSON formats for instances and decompositions.

Instance: ``{"n": int, "colours": [...]}`` with the flat row-major
upper-triangular colour array. Decomposition: ``{"n": int, "parts": [[[u, v],
...], ...]}``.
"""

from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.core.factorization import verify_factorization
from rainbow_decomp.models import EdgeColouredKn, EdgeSet, edge_count, edge_index
from rainbow_decomp.utils.errors import (
    ErrorLocation,
    InvalidInstanceError,
    from_pydantic_error,
)
from rainbow_decomp.utils.logging import get_logger
from rainbow_decomp.utils.serialization import expect_mapping, read_json, write_json

logger = get_logger(__name__)


def instance_to_json(g: EdgeColouredKn) -> Dict[str, Any]:
    return {"n": g.n, "colours": list(g.colours)}


def instance_from_json(data: Any, source: str = "<memory>") -> EdgeColouredKn:
    """Validate a parsed instance, including the 1-factorization property.

    Raises:
        InvalidInstanceError: With one location per offending field or colour class
    """
    data = expect_mapping(data, source)
    n = data.get("n")
    colours = data.get("colours")
    if isinstance(n, int) and isinstance(colours, list) and n >= 2:
        expected = edge_count(n)
        if len(colours) != expected:
            raise InvalidInstanceError(
                message=f"{source}: colours has {len(colours)} entries, expected C({n},2) = {expected}",
                locations=[ErrorLocation(field="colours", message=f"expected {expected} entries")],
            )
        for k, c in enumerate(colours):
            if not isinstance(c, int) or isinstance(c, bool):
                raise InvalidInstanceError(
                    message=f"{source}: colours[{k}] is not an integer",
                    locations=[ErrorLocation(field=f"colours[{k}]", message="not an integer")],
                )
    try:
        g = EdgeColouredKn(n=n, colours=colours)
    except PydanticValidationError as e:
        raise from_pydantic_error(e, f"Invalid instance in {source}", InvalidInstanceError)

    violations = verify_factorization(g)
    if violations:
        locations = []
        for viol in violations:
            if viol.kind == "vertex-repeat":
                assert viol.colour is not None and viol.vertex is not None
                first = next(
                    edge_index(g.n, viol.vertex, w)
                    for w in range(g.n)
                    if w != viol.vertex and g.colour_of(viol.vertex, w) == viol.colour
                )
                locations.append(
                    ErrorLocation(
                        field=f"colours[{first}]",
                        message=f"colour {viol.colour} repeats at vertex {viol.vertex}",
                    )
                )
            elif viol.kind == "class-size":
                locations.append(
                    ErrorLocation(
                        field="colours",
                        message=f"colour {viol.colour} has {viol.observed} edges, expected {g.n // 2}",
                    )
                )
            else:
                locations.append(
                    ErrorLocation(field="colours", message=f"{viol.observed} colours used, expected {g.n - 1}")
                )
        raise InvalidInstanceError(
            message=f"{source}: colouring is not a 1-factorization",
            details={"violations": [v.model_dump() for v in violations]},
            locations=locations,
        )
    return g


def load_instance(path: Union[str, Path]) -> EdgeColouredKn:
    g = instance_from_json(read_json(path), source=str(path))
    logger.debug("Instance loaded", path=str(path), n=g.n, operation="load_instance")
    return g


def dump_instance(g: EdgeColouredKn, path: Union[str, Path]) -> None:
    write_json(path, instance_to_json(g))


def decomposition_to_json(n: int, parts: Sequence[EdgeSet]) -> Dict[str, Any]:
    return {"n": n, "parts": [[list(e) for e in part.sorted_edges()] for part in parts]}


def decomposition_from_json(data: Any, source: str = "<memory>") -> List[EdgeSet]:
    data = expect_mapping(data, source)
    n = data.get("n")
    raw_parts = data.get("parts")
    if not isinstance(n, int) or not isinstance(raw_parts, list):
        raise InvalidInstanceError(
            message=f"{source}: decomposition needs integer 'n' and list 'parts'",
            locations=[ErrorLocation(field="$", message="missing n or parts")],
        )
    parts = []
    for i, raw in enumerate(raw_parts):
        try:
            parts.append(EdgeSet(n=n, edges=[tuple(e) for e in raw]))
        except (PydanticValidationError, TypeError, ValueError) as e:
            raise InvalidInstanceError(
                message=f"{source}: parts[{i}] is not a valid edge set",
                locations=[ErrorLocation(field=f"parts[{i}]", message=str(e).splitlines()[0])],
            )
    return parts


def load_decomposition(path: Union[str, Path]) -> List[EdgeSet]:
    return decomposition_from_json(read_json(path), source=str(path))


__all__ = [
    "instance_to_json",
    "instance_from_json",
    "load_instance",
    "dump_instance",
    "decomposition_to_json",
    "decomposition_from_json",
    "load_decomposition",
]
