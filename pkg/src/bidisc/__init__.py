"""Shift-invariant subspaces of degree-truncated Hardy space on the bidisc."""

from .errors import *  # noqa: F401,F403
from .hardy_core import (
    DegreeWindow,
    DiscPoint,
    HardyElement,
    LaurentSpectrum,
    adjoint_shift,
    adjoint_toeplitz_apply,
    boundary_product_spectrum,
    cauchy_kernel,
    derivative_representer,
    evaluate,
    inner_product,
    polynomial,
    shift,
    toeplitz_apply,
)
from .mandrekar import (
    BeurlingVerdict,
    DcReport,
    InnerReport,
    Tolerances,
    Verdict,
    beurling_verdict,
    dc_defect,
    extract_inner_kernel,
    extract_inner_wandering,
    identity_suite,
    innerness_report,
    toeplitz_kernel_identity_check,
)
from .subspace import (
    GeneratorSet,
    OrthonormalBasis,
    complement_in,
    intersect,
    kernel_at,
    project,
    shift_image,
    span_invariant,
    subspace_distance,
)

__version__ = "0.1.0"
