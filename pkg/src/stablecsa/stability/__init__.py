"""Stability of tuples: symbolic pairing certificates and a finite-field oracle."""

from .oracle import (
    NotSkew,
    ResamplingExhausted,
    StabilityCertificate,
    exact_witness_search,
    planted_block_tuple,
    specialized_stability,
    verify_specialized,
)
from .symbolic import (
    AnisotropyFailure,
    CrossTermsPresent,
    DependentBasis,
    DiagonalQuadraticForm,
    EigenSpace,
    EigenSystem,
    NotDiagonalizable,
    SymbolicResult,
    certify_anisotropic,
    eigen_system,
    generic_pairing,
    is_isotropic_subspace,
    pairing_quadratic_form,
    square_class,
    symbolic_certificate,
    verify_symbolic,
)

__all__ = [
    "AnisotropyFailure",
    "CrossTermsPresent",
    "DependentBasis",
    "DiagonalQuadraticForm",
    "EigenSpace",
    "EigenSystem",
    "NotDiagonalizable",
    "NotSkew",
    "ResamplingExhausted",
    "StabilityCertificate",
    "SymbolicResult",
    "certify_anisotropic",
    "eigen_system",
    "exact_witness_search",
    "generic_pairing",
    "is_isotropic_subspace",
    "pairing_quadratic_form",
    "planted_block_tuple",
    "specialized_stability",
    "square_class",
    "symbolic_certificate",
    "verify_specialized",
    "verify_symbolic",
]
