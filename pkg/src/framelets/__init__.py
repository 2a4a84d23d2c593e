"""Compactly supported Parseval frame wavelets for determinant +/-2 dilations.

The pipeline: reduce a dilation matrix to a partition-friendly similar
copy, solve the Lawton system on a chosen support, iterate the cascade
to a scaling function, derive the wavelet mask, and verify filter and
frame properties numerically.
"""

from .errors import (
    FrameletError,
    InvariantError,
    NoSolutionError,
    ParseError,
    PreconditionError,
)
from .lattice import (
    Det2Factorization,
    Dilate,
    IntMatrix,
    Shear,
    SignFlip,
    Swap,
    apply_factor_right,
    det2_factorize,
    det_exact,
    is_expansive,
    lv_factorize,
    recompose,
    unimodular_factorize,
)
from .partition import (
    CosetLabel,
    PartitionData,
    PartitionReport,
    coset_of,
    reduce,
    verify_partition,
)
from .lawton import (
    LawtonCheck,
    LawtonSystem,
    Mask,
    SolveConfig,
    build_system,
    mark_verified,
    residual,
    solve,
    verify,
)
from .cascade import (
    CascadeResult,
    SampledFunction,
    cascade_step,
    fourier_transform,
    init_indicator,
    iterate,
    l2_norm,
    point_samples,
    sample_at_level,
    translates_gram,
)
from .filters import (
    SupportBound,
    check_qmf,
    cube_transform,
    eval_g,
    eval_m0,
    support_bound,
)
from .wavelet import (
    build_wavelet,
    conjugate_mask,
    conjugate_to_original,
    two_scale_residual,
    wavelet_mask,
)
from .frame import (
    FrameReport,
    ParsevalPartial,
    analysis_coeff,
    analysis_window,
    frame_report,
    lj_curve,
    parseval_partial_sum,
    random_test_function,
    telescope_check,
)

__version__ = "0.1.0"

__all__ = [
    "FrameletError", "InvariantError", "NoSolutionError", "ParseError",
    "PreconditionError",
    "Det2Factorization", "Dilate", "IntMatrix", "Shear", "SignFlip", "Swap",
    "apply_factor_right", "det2_factorize", "det_exact", "is_expansive",
    "lv_factorize", "recompose", "unimodular_factorize",
    "CosetLabel", "PartitionData", "PartitionReport", "coset_of", "reduce",
    "verify_partition",
    "LawtonCheck", "LawtonSystem", "Mask", "SolveConfig", "build_system",
    "mark_verified", "residual", "solve", "verify",
    "CascadeResult", "SampledFunction", "cascade_step", "fourier_transform",
    "init_indicator", "iterate", "l2_norm", "point_samples",
    "sample_at_level", "translates_gram",
    "SupportBound", "check_qmf", "cube_transform", "eval_g", "eval_m0",
    "support_bound",
    "build_wavelet", "conjugate_mask", "conjugate_to_original",
    "two_scale_residual", "wavelet_mask",
    "FrameReport", "ParsevalPartial", "analysis_coeff", "analysis_window",
    "frame_report", "lj_curve", "parseval_partial_sum",
    "random_test_function", "telescope_check",
]
