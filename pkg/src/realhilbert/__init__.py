"""Finite-dimensional toolkit for real Hilbert space quantum mechanics.

Commutants and their real/complex/quaternionic type, complex structures,
polar decompositions, projector lattices, states as measures and the
emergence of a complex structure from a Poincare representation.
"""
from __future__ import annotations

from .bundle import MatrixBundle, load_bundle, save_bundle
from .errors import InputError, RealHilbertError, VerdictError
from .linalg import DEFAULT_TOL, Tolerances
from .poincare import (
    PoincareRep,
    Verdict,
    check_relations,
    decomplexify_complex_rep,
    extract_complex_structure,
    squared_mass,
    uniqueness_scan,
)
from .quantum_states import density_from_measure, measure_from_density, trace_in_structure
from .spectral import polar, pvm_of, stone_generator
from .structures import ComplexStructure, QuaternionicPair
from .vnalg import CommutantKind, classify, commutant, double_commutant, generate_algebra

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL", "Tolerances", "MatrixBundle", "load_bundle", "save_bundle",
    "RealHilbertError", "InputError", "VerdictError",
    "ComplexStructure", "QuaternionicPair",
    "generate_algebra", "commutant", "double_commutant", "classify", "CommutantKind",
    "polar", "pvm_of", "stone_generator",
    "density_from_measure", "measure_from_density", "trace_in_structure",
    "PoincareRep", "check_relations", "squared_mass", "extract_complex_structure",
    "uniqueness_scan", "decomplexify_complex_rep", "Verdict",
]
