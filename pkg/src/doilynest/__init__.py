"""Maximal commuting sets of the qubit x qu-2^k-it Pauli group and their doily geometry."""
from .cliques import CaseTooLarge, build_graph, enumerate_maximal_sets, predicted_set_count
from .geometry import (Doily, GeometrySnapshot, Pencil, StructureError, build_geometry, detect_lines,
                       detect_pencils, enumerate_doilies, exceptional_subgeometry, tricentric_triad_check)
from .isomorphism import isomorphic
from .pauli import Case, PauliElement, all_elements, commutes, element_index, index_to_element
from .report import expected_counts, run_pipeline, verify_published_listings

__version__ = "0.1.0"
