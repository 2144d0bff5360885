"""Optimization on the Stiefel manifold through the Cayley parametrization."""

from ._core import (
    CenterPoint,
    CostFunction,
    DimensionError,
    EigenInstance,
    Error,
    FactorizationError,
    LineSearchStalled,
    PreconditionError,
    RankError,
    SingularMatrixError,
    SingularPointError,
    SkewParam,
    StepTooLargeError,
    align_right_invariant,
    canonicalize_general_skew,
    constant_cost,
    construct_center,
    distance_cost,
    eigen_cost,
    eigen_instance_from_matrix,
    feasibility,
    forward,
    grad_at_zero,
    grad_pullback,
    grad_retraction_pullback,
    inverse,
    inverse_retract_cayley,
    make_eigen_instance,
    mobility,
    project_tangent,
    retract_cayley,
    retract_polar,
    retract_qr,
    rotation_center,
    run_gdm_cp,
    run_gdm_cp_retraction,
    run_gdm_retraction,
    singular_diagnostic,
    stationarity_residual,
    transform_gradient,
)

__version__ = "0.1.0"
