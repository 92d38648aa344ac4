"""Certificates of polynomial nonnegativity via sums of nonnegative circuits."""
from .circuit import (
    CircuitPolynomial,
    Comparison,
    NonnegativityClass,
    barycentric_coordinates,
    circuit_number_log,
    classify,
    compare_exact,
    is_circuit_support,
    support_reduction,
)
from .certificate import (
    SoncCertificate,
    SymmetricSoncCertificate,
    Verdict,
    expand,
    verify,
    verify_symmetric,
)
from .decompose import decompose, decompose_symmetric, enumerate_circuits
from .muirhead import (
    caratheodory_decomposition,
    generalized_muirhead_gap,
    in_permutation_polytope,
    majorizes,
    muirhead_gap,
)
from .poly import SparsePolynomial, combine, evaluate, parse, signed_partition
from .symmetry import GROUP_SUM, ORBIT_SUM, apply_permutation, is_symmetric, orbit, symmetrize

__version__ = "0.1.0"

__all__ = [
    "CircuitPolynomial", "Comparison", "NonnegativityClass", "barycentric_coordinates",
    "circuit_number_log", "classify", "compare_exact", "is_circuit_support", "support_reduction",
    "SoncCertificate", "SymmetricSoncCertificate", "Verdict", "expand", "verify", "verify_symmetric",
    "decompose", "decompose_symmetric", "enumerate_circuits",
    "caratheodory_decomposition", "generalized_muirhead_gap", "in_permutation_polytope", "majorizes",
    "muirhead_gap",
    "SparsePolynomial", "combine", "evaluate", "parse", "signed_partition",
    "GROUP_SUM", "ORBIT_SUM", "apply_permutation", "is_symmetric", "orbit", "symmetrize",
]
