"""Edge-coloured complete graphs: factorizations, predicates, splits and I/O."""

from rainbow_decomp.core.factorization import (
    factorization_signature,
    generate_circle_factorization,
    generate_random_factorization,
    permute_vertices,
    verify_factorization,
)
from rainbow_decomp.core.instance_io import (
    decomposition_from_json,
    decomposition_to_json,
    dump_instance,
    instance_from_json,
    instance_to_json,
    load_decomposition,
    load_instance,
)
from rainbow_decomp.core.predicates import (
    bounded_threshold,
    check_bounded,
    colours_of,
    is_rainbow,
    is_spanning_tree,
    verify_decomposition,
)
from rainbow_decomp.core.splits import random_split

__all__ = [
    "factorization_signature",
    "generate_circle_factorization",
    "generate_random_factorization",
    "permute_vertices",
    "verify_factorization",
    "decomposition_from_json",
    "decomposition_to_json",
    "dump_instance",
    "instance_from_json",
    "instance_to_json",
    "load_decomposition",
    "load_instance",
    "bounded_threshold",
    "check_bounded",
    "colours_of",
    "is_rainbow",
    "is_spanning_tree",
    "verify_decomposition",
    "random_split",
]
