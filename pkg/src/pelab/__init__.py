"""Exact construction and numerical verification of a closed-form family
of Poincare-Einstein metrics on complex line bundles, together with its
conic and Ricci-flat degeneration limits and an audit of the circulating
closed-form constants."""

from .laurent import LaurentPoly, LaurentQuotient, NonIntegrableTerm, Rational, ZeroBase
from .family import (
    AuditMismatch,
    ConicCase,
    ConicModel,
    ConformalInfinity,
    EdgeCase,
    EdgeModel,
    FamilyParams,
    MetricCoefficients,
    NoSmoothMetric,
    PositivityViolation,
    asymptotic_coefficients,
    cone_angle,
    conformal_infinity,
    conic_model,
    cpn_catalogue,
    edge_model,
    expand_at_edge,
    metric_coefficients,
    positivity_check,
    profile_slope_at_r1,
    scaling_action,
    smooth_c,
    solve_profile,
    z_scale,
)
from .limits import (
    DomainError,
    RescaledProfile,
    flat_recovery,
    limit_comparison,
    limit_smoothness,
    profile_ode_residual,
    rescale_map,
    rescaled_profile,
    rho1_limit,
)
from .jets import Jet2
from .geom import (
    ChartMetric,
    CurvatureReport,
    DegeneratePlane,
    SingularMetric,
    StepTooLarge,
    UnsupportedDimension,
    christoffel,
    curvature_report,
    einstein_residual,
    fd_oracle,
    page_pope_chart,
    rescaled_chart,
    ricci,
    riemann,
    scalar_curvature,
    sectional,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
