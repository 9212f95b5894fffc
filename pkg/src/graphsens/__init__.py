"""Sensitivity and block sensitivity of graph properties on small vertex counts."""

from .graphs import (CanonicalSignature, LabeledGraph, Permutation, apply_permutation,
                     are_isomorphic, canonical_form, edge_index, edge_unindex,
                     enumerate_iso_classes, is_graph_property, is_monotone, num_edges,
                     property_from_class_set)
from .hypercube import (BooleanPoint, MalformedInput, PropertyFunction, block_sensitivity_at,
                        complement, flip, is_nontrivial, max_block_sensitivity, max_sensitivity,
                        read_truth_table, sensitivity_at, write_truth_table)
from .structures import (INF, classify_components, degree_truncation, minimal_graphs,
                         positive_min_degree, positive_min_tree_size, tree_construction_sequence,
                         tree_truncation)
from .witness import extract_witness, run_case1, run_case2, run_case3, run_extraction

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
