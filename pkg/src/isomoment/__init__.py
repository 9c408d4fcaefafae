"""Moments of inertia of planar and N-dimensional bodies, the isoperimetric
inequalities they satisfy, Stekloff eigenvalue bounds from the Poincare
variational principle, and constrained Fourier shape optimization."""

from .errors import (
    ConditioningError,
    ConstantSpeedError,
    DegenerateShapeError,
    HypothesisViolationError,
    NonSimpleCurveError,
    OrientationError,
    ShapeError,
    ShapeFileError,
    UnsupportedShapeError,
)
from .fourier import (
    FourierBoundary,
    LagrangeReport,
    ParsevalSummary,
    TwoModeSpeedCoefficients,
    constant_speed_residual,
    evaluate,
    lagrange_system,
    parseval_quantities,
    quadrature_moments,
    reconstruct_speed_squared,
    reparametrize_constant_speed,
    two_mode_speed_coefficients,
)
from .geometry import (
    Ball,
    Ellipsoid,
    MomentSummary,
    Placement,
    Polygon,
    SimplicialBody,
    ball_boundary_moment,
    ball_surface_measure,
    ball_volume_moment,
    ellipsoid_moments,
    polygon_moments,
    regular_polygon,
    simplicial_moments,
    unit_ball_volume,
)
from .inequalities import (
    INEQUALITY_IDS,
    InequalityReport,
    batch_verify,
    equality_gap_scan,
    evaluate_inequality,
)
from .offsets import (
    ConcavityReport,
    ExpansionFit,
    OffsetBody,
    concavity_scan,
    fit_expansion,
    offset_moments,
)
from .ops import (
    apply_affinity,
    canonical_placement,
    is_convex,
    moments,
    normalize_J,
    shape_kind,
)
from .optimize import (
    OptimizationProblem,
    OptimizationTrace,
    StationarityReport,
    apply_gauge,
    boundary_moment_product,
    minimize_product,
    objective_gradient,
    projected_gradient,
    stationarity_report,
)
from .stekloff import (
    BallSpectrum,
    RayleighPair,
    SpectralChainReport,
    StekloffBounds,
    ball_spectrum,
    converge_spectrum,
    coordinate_bounds,
    rayleigh_pair,
    spectral_chain_check,
)

__version__ = "0.1.0"
