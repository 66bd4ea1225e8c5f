"""Operator scaling of finite fusion frames."""

from .errors import *  # noqa: F401,F403
from .frame import (
    FrameAnalysis,
    FusionFrame,
    WeightedSubspace,
    canonical_dual,
    classify,
    excess,
    frame_bounds,
    frame_operator,
    is_riesz_basis,
    local_frame,
    reconstruct,
    synthesis_matrix,
)
from .linalg import DEFAULT_TOL, Subspace, Tolerances, orthonormalize, subspace_relation
from .one_excess import (
    OneExcessDecomposition,
    PartitionCertificate,
    ScalabilityVerdict,
    canonicalize_r2,
    decide_one_excess,
    decompose_one_excess,
    necessary_conditions,
    partition_check,
    partition_scaler,
    r2_closed_form,
    scaling_identity_residual,
)
from .riesz import (
    ScalingPair,
    ScalingReport,
    check_riesz_conditions,
    construct_riesz_scaler,
    d_operator_check,
    scaler_family_from_coeffs,
    transfer_scaling,
    verify_scaling,
)
from .search import SearchOptions, SearchResult, objective, search_operator_scaling, weight_only_solve

__version__ = "0.1.0"
