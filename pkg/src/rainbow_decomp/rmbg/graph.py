"""The robustly-matchable bipartite graph type and its JSON format."""

from pathlib import Path
from typing import Any, Dict, Iterable, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as PydanticValidationError

from rainbow_decomp.utils.errors import InvalidArgumentError, InvalidInstanceError, from_pydantic_error
from rainbow_decomp.utils.serialization import expect_mapping, read_json, write_json


class Rmbg(BaseModel):
    """Bipartite graph on (X, Y ∪ Z).

    Right-hand vertices are indexed with Y first (``0 .. y_size-1``) and Z
    after (``y_size .. y_size+z_size-1``). The robust-matchability contract
    (every Y′ ⊆ Y of size ``x_size - z_size`` admits a perfect matching of
    X into Y′ ∪ Z) is verified separately.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    x_size: int = Field(..., ge=0)
    y_size: int = Field(..., ge=0)
    z_size: int = Field(..., ge=0)
    adjacency: Tuple[Tuple[int, ...], ...] = Field(
        ..., description="Sorted right neighbours of each x"
    )

    @model_validator(mode="after")
    def validate_shape(self) -> "Rmbg":
        if self.x_size < self.z_size:
            raise ValueError(
                f"x_size ({self.x_size}) must be at least z_size ({self.z_size})"
            )
        if len(self.adjacency) != self.x_size:
            raise ValueError(f"adjacency has {len(self.adjacency)} rows for x_size {self.x_size}")
        right = self.right_size
        for x, row in enumerate(self.adjacency):
            if list(row) != sorted(set(row)):
                raise ValueError(f"neighbours of x{x} must be sorted and distinct")
            if row and (row[0] < 0 or row[-1] >= right):
                raise ValueError(f"neighbours of x{x} outside [0, {right - 1}]")
        return self

    @classmethod
    def build(
        cls, x_size: int, y_size: int, z_size: int, adjacency: Iterable[Iterable[int]]
    ) -> "Rmbg":
        """Construct with normalized rows; pydantic failures become InvalidArgumentError."""
        rows = tuple(tuple(sorted(set(row))) for row in adjacency)
        try:
            return cls(x_size=x_size, y_size=y_size, z_size=z_size, adjacency=rows)
        except PydanticValidationError as e:
            raise from_pydantic_error(
                e,
                "Invalid RMBG",
                parameters={"x_size": x_size, "y_size": y_size, "z_size": z_size},
            )

    @classmethod
    def complete(cls, x_size: int, y_size: int, z_size: int) -> "Rmbg":
        row = tuple(range(y_size + z_size))
        return cls.build(x_size, y_size, z_size, [row] * x_size)

    @property
    def right_size(self) -> int:
        return self.y_size + self.z_size

    @property
    def deficiency(self) -> int:
        """Size of the admissible subsets Y′, ``x_size - z_size``."""
        return self.x_size - self.z_size

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adjacency)

    def is_y(self, r: int) -> bool:
        return r < self.y_size

    def x_degrees(self) -> List[int]:
        return [len(row) for row in self.adjacency]

    def right_degrees(self) -> List[int]:
        degrees = [0] * self.right_size
        for row in self.adjacency:
            for r in row:
                degrees[r] += 1
        return degrees

    def max_degree(self) -> int:
        return max(self.x_degrees() + self.right_degrees(), default=0)

    def edges(self) -> List[Tuple[int, int]]:
        return [(x, r) for x, row in enumerate(self.adjacency) for r in row]

    def with_edges(self, extra: Iterable[Tuple[int, int]]) -> "Rmbg":
        """Supergraph on the same parts with ``extra`` (x, r) pairs added."""
        rows = [set(row) for row in self.adjacency]
        for x, r in extra:
            rows[x].add(r)
        return Rmbg.build(self.x_size, self.y_size, self.z_size, rows)


def rmbg_to_json(h: Rmbg) -> Dict[str, Any]:
    """``{"m", "adj"}`` for the standard (3m, 2m, 2m) shape, explicit sizes otherwise."""
    adj = [list(row) for row in h.adjacency]
    m = h.y_size // 2
    if h.y_size == h.z_size == 2 * m and h.x_size == 3 * m and m > 0:
        return {"m": m, "adj": adj}
    return {"x_size": h.x_size, "y_size": h.y_size, "z_size": h.z_size, "adj": adj}


def rmbg_from_json(data: Any, source: str = "<memory>") -> Rmbg:
    data = expect_mapping(data, source)
    adj = data.get("adj")
    if not isinstance(adj, list):
        raise InvalidInstanceError(message=f"{source}: 'adj' must be a list of neighbour lists")
    if "m" in data:
        m = data["m"]
        if not isinstance(m, int) or m < 1:
            raise InvalidInstanceError(message=f"{source}: 'm' must be a positive integer")
        sizes = (3 * m, 2 * m, 2 * m)
    else:
        sizes = (data.get("x_size"), data.get("y_size"), data.get("z_size"))
        if not all(isinstance(v, int) for v in sizes):
            raise InvalidInstanceError(message=f"{source}: need 'm' or all of x_size, y_size, z_size")
    try:
        return Rmbg.build(sizes[0], sizes[1], sizes[2], adj)  # type: ignore[arg-type]
    except InvalidArgumentError as e:
        raise InvalidInstanceError(message=f"{source}: {e.message}", details=e.details, locations=e.locations)


def load_rmbg(path: Union[str, Path]) -> Rmbg:
    return rmbg_from_json(read_json(path), source=str(path))


def dump_rmbg(h: Rmbg, path: Union[str, Path]) -> None:
    write_json(path, rmbg_to_json(h))


__all__ = ["Rmbg", "rmbg_to_json", "rmbg_from_json", "load_rmbg", "dump_rmbg"]
