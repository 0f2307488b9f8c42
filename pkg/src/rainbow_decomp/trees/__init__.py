"""Target trees, gadgets, connectors and tree isomorphism."""

from rainbow_decomp.trees.canonical import canonical_form, centroids, tree_isomorphic
from rainbow_decomp.trees.connector import Connector, build_connector
from rainbow_decomp.trees.gadgets import (
    AbsorberChain,
    build_absorber_chain,
    build_T,
    build_T_delta3,
    delta3_connector_vertices,
    delta3_end_vertices,
    delta3_gadget_vertices,
    delta3_spine_length,
    delta3_start_vertices,
    spine_length,
)
from rainbow_decomp.trees.shape import TreeShape, dump_tree, load_tree, tree_from_json, tree_to_json

__all__ = [
    "canonical_form",
    "centroids",
    "tree_isomorphic",
    "Connector",
    "build_connector",
    "AbsorberChain",
    "build_absorber_chain",
    "build_T",
    "build_T_delta3",
    "delta3_connector_vertices",
    "delta3_end_vertices",
    "delta3_gadget_vertices",
    "delta3_spine_length",
    "delta3_start_vertices",
    "spine_length",
    "TreeShape",
    "dump_tree",
    "load_tree",
    "tree_from_json",
    "tree_to_json",
]
