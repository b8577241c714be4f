"""Filter bank relations, loop matrices, and truncated Fock spaces."""

from .laurent import (
    DEFAULT_GRID,
    PRUNE_EPS,
    LaurentPoly,
    TorusPoint,
    adjoint_poly,
    decimate,
    poly_from_json,
    poly_to_json,
    torus_grid,
    upsample,
)
from .errors import (
    BadNormalizationError,
    DepthExceededError,
    DualLengthMismatchError,
    EmptyAnchorError,
    NotPsdError,
    NotReconstructiveError,
    NotUnitaryError,
    SingularLoopError,
    SizeCapError,
    WavefockError,
)
from .filterbank import (
    FilterBank,
    RelationReport,
    apply_S,
    apply_S_adjoint,
    module_expand,
    module_reconstruct,
    relation_report,
)
from .polyphase import (
    GramMatrixFunction,
    LoopMatrix,
    SampledLoop,
    dual_loop,
    filters_from_loop,
    gram_function,
    loop_from_filters,
    loop_pair_residual,
    loop_unitarity_residual,
    modulation_matrix,
    modulation_matrix_check,
)
from .subdivision import (
    PyramidDecomposition,
    SignalWindow,
    SlantedToeplitz,
    fourier_product,
    haar_scaling_transform,
    pyramid,
    pyramid_reconstruct,
    subdivide,
)
from .anchor import (
    AnchorSubspace,
    CyclicityReport,
    compute_anchor,
    cyclicity_check,
    pullback_depth,
)
from .fock import (
    ChoiMatrix,
    ChoiReport,
    CreationOps,
    TruncatedFock,
    basis_change_equivalence,
    creation_matrices,
    fourier_projections_check,
    level_gram,
    level_kernel,
    truncated_fock,
    tstar_t_check,
    validate_choi,
)
from .wavelet_fock import Cor6Report, SampledWaveletChoi, cor6_check, sampled_choi
from .acceptance import AcceptanceSummary, CriterionResult, run_all

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_GRID",
    "PRUNE_EPS",
    "LaurentPoly",
    "TorusPoint",
    "adjoint_poly",
    "decimate",
    "poly_from_json",
    "poly_to_json",
    "torus_grid",
    "upsample",
    "WavefockError",
    "BadNormalizationError",
    "DepthExceededError",
    "DualLengthMismatchError",
    "EmptyAnchorError",
    "NotPsdError",
    "NotReconstructiveError",
    "NotUnitaryError",
    "SingularLoopError",
    "SizeCapError",
    "FilterBank",
    "RelationReport",
    "apply_S",
    "apply_S_adjoint",
    "module_expand",
    "module_reconstruct",
    "relation_report",
    "GramMatrixFunction",
    "LoopMatrix",
    "SampledLoop",
    "dual_loop",
    "filters_from_loop",
    "gram_function",
    "loop_from_filters",
    "loop_pair_residual",
    "loop_unitarity_residual",
    "modulation_matrix",
    "modulation_matrix_check",
    "PyramidDecomposition",
    "SignalWindow",
    "SlantedToeplitz",
    "fourier_product",
    "haar_scaling_transform",
    "pyramid",
    "pyramid_reconstruct",
    "subdivide",
    "AnchorSubspace",
    "CyclicityReport",
    "compute_anchor",
    "cyclicity_check",
    "pullback_depth",
    "ChoiMatrix",
    "ChoiReport",
    "CreationOps",
    "TruncatedFock",
    "basis_change_equivalence",
    "creation_matrices",
    "fourier_projections_check",
    "level_gram",
    "level_kernel",
    "truncated_fock",
    "tstar_t_check",
    "validate_choi",
    "Cor6Report",
    "SampledWaveletChoi",
    "cor6_check",
    "sampled_choi",
    "AcceptanceSummary",
    "CriterionResult",
    "run_all",
    "__version__",
]
