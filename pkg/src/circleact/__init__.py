"""Finite dimensional linear coactions on the circle algebra.

Certification, classification, and numerical exploration of matrix
pairs that send the circle generator to deg(+1) x A + deg(-1) x B.
"""

from .linalg import (
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    SchemaError,
    adjoint,
    frobenius,
    hermitian_eig,
    kron,
    nullspace_basis,
    opnorm_bound,
)
from .coaction import (
    CertificateReport,
    CheckResult,
    ConjugatePair,
    LaurentMatrixPoly,
    LinearObject,
    apply_coaction,
    check_conjugate_matrix,
    check_conjugate_raw,
    check_homomorphism,
    kac_vector,
    reflection,
    rotation,
)
from .certify import (
    AmbiguousSlot,
    Character,
    ClassicalDecomposition,
    ConstraintViolation,
    NotSimultaneouslyDiagonalizable,
    PolarData,
    canonical_dual,
    certify_commutativity,
    certify_duality,
    classical_form,
    is_partial_isometry,
    polar_data,
)
from .category import (
    Decomposition,
    DecompositionFailure,
    MorphismBasis,
    check_snake,
    conjugate_object,
    decompose,
    direct_sum,
    is_irreducible,
    morphism_space,
    tensor_product,
)
from .solver import (
    SolverConfig,
    SolverOutcome,
    SolverRun,
    gradient,
    gradient_check,
    residual,
    sample_classical,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousSlot",
    "CertificateReport",
    "Character",
    "CheckResult",
    "ClassicalDecomposition",
    "ConjugatePair",
    "ConstraintViolation",
    "Decomposition",
    "DecompositionFailure",
    "DimensionMismatch",
    "LaurentMatrixPoly",
    "LinearObject",
    "MorphismBasis",
    "NoConvergence",
    "NotHermitian",
    "NotSimultaneouslyDiagonalizable",
    "PolarData",
    "SchemaError",
    "SolverConfig",
    "SolverOutcome",
    "SolverRun",
    "adjoint",
    "apply_coaction",
    "canonical_dual",
    "certify_commutativity",
    "certify_duality",
    "check_conjugate_matrix",
    "check_conjugate_raw",
    "check_homomorphism",
    "check_snake",
    "classical_form",
    "conjugate_object",
    "decompose",
    "direct_sum",
    "frobenius",
    "gradient",
    "gradient_check",
    "hermitian_eig",
    "is_irreducible",
    "is_partial_isometry",
    "kac_vector",
    "kron",
    "morphism_space",
    "nullspace_basis",
    "opnorm_bound",
    "polar_data",
    "reflection",
    "residual",
    "rotation",
    "sample_classical",
    "solve",
    "tensor_product",
]
