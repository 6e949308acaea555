"""Entanglement detection in permutation-symmetric multiqubit states.

Symmetric N-qubit density matrices live on the compact (N+1)-dimensional
Dicke basis; their even-order inter-group covariance matrices are positive
semidefinite for every fully separable state, so a negative eigenvalue (or a
negative principal minor) certifies entanglement across the corresponding
even partition.
"""

from .covariance import (
    CovarianceMatrix,
    MinorCertificate,
    NegativityReport,
    WitnessCertificate,
    covariance_matrix,
    full_variance,
    min_eigenvalue,
    principal_minor_search,
    report_to_payload,
    rotate,
    test_entanglement,
)
from .scanner import (
    AnalyticThresholds,
    Detector,
    ScanResult,
    analytic_thresholds,
    detector_value,
    scan_threshold,
    scan_to_payload,
)
from .states import (
    BlochDirection,
    SymmetricState,
    ValidationReport,
    dicke_state,
    ghz_state,
    maximally_mixed_state,
    noisy_family,
    noisy_mixture,
    product_state,
    reduced_state,
    state_from_description,
    state_from_payload,
    state_to_payload,
    validate,
    w_state,
)
from .tensors import (
    CorrelationTensor,
    MultiIndex,
    correlation_tensor,
    moment_column,
    moment_matrix,
    tensor_from_payload,
    tensor_to_payload,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticThresholds",
    "BlochDirection",
    "CorrelationTensor",
    "CovarianceMatrix",
    "Detector",
    "MinorCertificate",
    "MultiIndex",
    "NegativityReport",
    "ScanResult",
    "SymmetricState",
    "ValidationReport",
    "WitnessCertificate",
    "analytic_thresholds",
    "correlation_tensor",
    "covariance_matrix",
    "detector_value",
    "dicke_state",
    "full_variance",
    "ghz_state",
    "maximally_mixed_state",
    "min_eigenvalue",
    "moment_column",
    "moment_matrix",
    "noisy_family",
    "noisy_mixture",
    "principal_minor_search",
    "product_state",
    "reduced_state",
    "report_to_payload",
    "rotate",
    "scan_threshold",
    "scan_to_payload",
    "state_from_description",
    "state_from_payload",
    "state_to_payload",
    "tensor_from_payload",
    "tensor_to_payload",
    "test_entanglement",
    "validate",
    "w_state",
]
