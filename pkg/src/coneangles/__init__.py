"""Angles between convex cones: representations, projectors, solvers."""

from .angles import (
    AngleReport,
    PrincipalCertificate,
    beta,
    c0,
    c0_oracle,
    c_angle,
    certify_principal,
    direct_beta_estimate,
    direct_gamma_estimate,
    gamma,
    principal_vectors,
)
from .cones import (
    DEFAULT_CONFIG,
    ConeExpr,
    Generated,
    HalfspaceCone,
    Intersect,
    Neg,
    Polar,
    Ray,
    SecondOrder,
    Subspace,
    ToleranceConfig,
    Zero,
    as_point,
    dual,
    intersect,
    is_linear_subspace,
    is_trivial,
    make_ray,
    member,
    negate,
    polar,
)
from .cyclic import Trace, TranslatedSet, estimate_rate, run_cyclic, theoretical_rate, translated
from .errors import (
    ConeGeometryError,
    DichotomyFailure,
    DimensionMismatch,
    HypothesisViolated,
    IdentityNotApplicable,
    InsufficientData,
    IterationLimit,
    SignConditionViolated,
    UnsupportedDimension,
    WitnessNotFound,
    ZeroDirection,
)
from .projections import (
    ProjectionCertificate,
    certify_projection,
    distance,
    dykstra,
    nnls,
    project,
    sample_members,
)
from .scenes import Scene, load_scene, parse_scene, scene_to_doc
from .theorems import (
    ConditionReport,
    check_sum_closedness,
    check_trivial_intersection,
    common_direction,
    dichotomy_check,
    ivt_orthogonal_point,
    nonclosedness_probe,
    polar_intersection_witness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
