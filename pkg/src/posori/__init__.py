"""Invariant metrics and the mav distance on 3D position-orientation space.

A point is a position in R^3 plus a unit orientation vector.  The package
implements the full 5-weight family of roto-translation invariant
Riemannian metrics on this space, the minimal-angular-velocity (mav)
generator and distance between points, pairwise invariant features for
learning, and seeded suites that certify the geometric claims numerically.
"""

from .features import (
    FeatureMatrix,
    InvariantTriple,
    bekkers_invariants,
    grad_weights,
    pairwise_features,
)
from .group import (
    PositionOrientation,
    RotoTranslation,
    TangentVector,
    Twist,
    act_algebra,
    act_point,
    act_tangent,
    angular_velocity,
    compose,
    exp_se3,
    exp_so3,
    hat,
    identity,
    inverse,
    left_jacobian,
    vee,
)
from .mav import (
    PlanarDecomposition,
    PureTranslationError,
    ScrewDisplacement,
    mav_curve,
    mav_distance,
    mav_generator,
    planar_decompose,
    planar_rototranslation,
    screw_decompose,
)
from .metric import (
    AdaptedFrame,
    MetricParams,
    adapted_frame,
    inner,
    is_positive,
    metric_matrix,
    norm_sq,
    pattern_matrix,
    reparam,
    restrict_e3,
    stabilizer_invariant_basis,
)
from .verify import (
    SuiteReport,
    alternative_generators,
    curve_length_quadrature,
    graph_geodesic_upper_bound,
    run_classification_check,
    run_invariance_suite,
    run_minimality_suite,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptedFrame",
    "FeatureMatrix",
    "InvariantTriple",
    "MetricParams",
    "PlanarDecomposition",
    "PositionOrientation",
    "PureTranslationError",
    "RotoTranslation",
    "ScrewDisplacement",
    "SuiteReport",
    "TangentVector",
    "Twist",
    "act_algebra",
    "act_point",
    "act_tangent",
    "adapted_frame",
    "alternative_generators",
    "angular_velocity",
    "bekkers_invariants",
    "compose",
    "curve_length_quadrature",
    "exp_se3",
    "exp_so3",
    "grad_weights",
    "graph_geodesic_upper_bound",
    "hat",
    "identity",
    "inner",
    "inverse",
    "is_positive",
    "left_jacobian",
    "mav_curve",
    "mav_distance",
    "mav_generator",
    "metric_matrix",
    "norm_sq",
    "pairwise_features",
    "pattern_matrix",
    "planar_decompose",
    "planar_rototranslation",
    "reparam",
    "restrict_e3",
    "run_classification_check",
    "run_invariance_suite",
    "run_minimality_suite",
    "screw_decompose",
    "stabilizer_invariant_basis",
    "vee",
]
