"""Curvature invariants and unitary equivalence of quotient Hilbert modules
over the unit disk, with a matrix-truncation oracle for every analytic claim."""

__version__ = "0.1.0"

from .errors import (
    CoronaFailure,
    DegeneratePoint,
    DepthExceeded,
    DiskModError,
    FunctionParseError,
    InvalidFunction,
    NoSpectralGap,
    PointOutsideDomain,
    SpecFileError,
    StencilOutsideDomain,
    TailBoundExceeded,
    UncertifiedSpec,
)
from .holofun import (
    HoloFun,
    MultiplierPair,
    common_zeros_in_disk,
    derivative,
    format_function,
    parse_function,
    poly,
    polynomial_gcd,
    polynomial_roots,
    rational,
)
from .rkhs import (
    BERGMAN,
    HARDY,
    ModuleKind,
    base_curvature,
    format_module_kind,
    kernel_eval,
    monomial_norm_sq,
    monomial_norms_sq,
    parse_module_kind,
    shift_weight,
    weighted_bergman,
)
from .curvature import (
    DEFAULT_GRID,
    CurvatureField,
    DiskGrid,
    QuotientSpec,
    curvature_field,
    fd_laplacian,
    laplacian_log_sumsq,
    quotient_curvature,
)
from .corona import (
    CoronaCertificate,
    certify,
    certify_spec,
    check_corona,
    lipschitz_bound,
    make_spec,
)
from .equivalence import (
    Outcome,
    Verdict,
    Witness,
    decide_equivalence,
    harmonicity_defect,
    lemma46_probe,
)
from .oracle import (
    GammaSection,
    TruncatedOperator,
    build_multiplier,
    build_shift,
    dim_ker_estimate,
    eigenvector_residual,
    gamma_gram,
    gamma_section,
    multiplier_min_singular_value,
    oracle_curvature,
    reproducing_check,
)
