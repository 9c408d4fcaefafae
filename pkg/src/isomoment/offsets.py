"""Outer parallel bodies of convex polygons and their moment expansions.

The Minkowski sum of a convex polygon with a disc of radius h decomposes
exactly into the polygon, one rectangle per edge, and one circular sector
per vertex, so every moment of the offset body is available in closed form.
The axis moments J_k of the offset are exact quartics in h whose linear
coefficient is the boundary moment I_k of the base polygon; fitting that
expansion and scanning root-concavity are the other two entry points here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateShapeError
from .geometry import (
    MomentSummary,
    Polygon,
    _build_summary,
    _segment_second_matrix,
    polygon_moments,
    unit_ball_volume,
)

__all__ = [
    "OffsetBody",
    "ExpansionFit",
    "ConcavityReport",
    "offset_moments",
    "fit_expansion",
    "concavity_scan",
    "chebyshev_grid",
]


def _require_convex(base: Polygon) -> None:
    if not base.is_convex():
        raise DegenerateShapeError("offset decomposition requires a convex base polygon")


@dataclass(frozen=True, eq=False)
class OffsetBody:
    """Convex polygon grown by a disc of radius h, with its exact decomposition."""

    base: Polygon
    h: float
    edge_normals: np.ndarray        # outward unit normal per edge
    sector_start: np.ndarray        # start angle of the sector at each vertex
    sector_span: np.ndarray         # exterior (turning) angle at each vertex

    def __init__(self, base: Polygon, h: float):
        _require_convex(base)
        if h < 0.0:
            raise DegenerateShapeError("offset radius must be nonnegative")
        v = base.vertices
        e = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(e, axis=1)
        normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
        angles = np.arctan2(normals[:, 1], normals[:, 0])
        # Sector at vertex i spans from the incoming edge normal (edge i-1)
        # to the outgoing edge normal (edge i), turning counterclockwise.
        start = np.roll(angles, 1)
        span = np.mod(angles - start, 2.0 * np.pi)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "h", float(h))
        object.__setattr__(self, "edge_normals", normals)
        object.__setattr__(self, "sector_start", start)
        object.__setattr__(self, "sector_span", span)
        if abs(float(np.sum(span)) - 2.0 * np.pi) > 1e-12 * 2.0 * np.pi:
            raise DegenerateShapeError("vertex sector angles do not close up to 2*pi")


def _sector_integrals(center: np.ndarray, radius: float, phi0: float, span: float):
    """Area, first and second moments, arc length and arc moments of one sector."""
    phi1 = phi0 + span
    cx, cy = center
    r2, r3, r4 = radius ** 2 / 2.0, radius ** 3 / 3.0, radius ** 4 / 4.0
    dsin = math.sin(phi1) - math.sin(phi0)
    dcos = -(math.cos(phi1) - math.cos(phi0))
    int_c2 = 0.5 * (span + 0.5 * (math.sin(2 * phi1) - math.sin(2 * phi0)))
    int_s2 = 0.5 * (span - 0.5 * (math.sin(2 * phi1) - math.sin(2 * phi0)))
    int_cs = 0.5 * (math.sin(phi1) ** 2 - math.sin(phi0) ** 2)

    area = r2 * span
    first = np.array([cx * area + r3 * dsin, cy * area + r3 * dcos])
    mxx = cx * cx * area + 2.0 * cx * r3 * dsin + r4 * int_c2
    myy = cy * cy * area + 2.0 * cy * r3 * dcos + r4 * int_s2
    mxy = cx * cy * area + cx * r3 * dcos + cy * r3 * dsin + r4 * int_cs
    M = np.array([[mxx, mxy], [mxy, myy]])

    arc = radius * span
    bfirst = np.array([cx * arc + radius ** 2 * dsin, cy * arc + radius ** 2 * dcos])
    bxx = radius * (cx * cx * span + 2.0 * cx * radius * dsin + radius ** 2 * int_c2)
    byy = radius * (cy * cy * span + 2.0 * cy * radius * dcos + radius ** 2 * int_s2)
    bxy = radius * (cx * cy * span + cx * radius * dcos + cy * radius * dsin
                    + radius ** 2 * int_cs)
    MB = np.array([[bxx, bxy], [bxy, byy]])
    return area, first, M, arc, bfirst, MB


def offset_moments(base: Polygon, h: float) -> MomentSummary:
    """Exact MomentSummary of the outer parallel body at offset radius h."""
    body = OffsetBody(base, h)
    inner = polygon_moments(base)
    if h == 0.0:
        return inner

    area = inner.volume
    first = inner.centroid * inner.volume
    M = inner.M.copy()
    surface = 0.0
    bfirst = np.zeros(2)
    MB = np.zeros((2, 2))

    v = base.vertices
    w = np.roll(v, -1, axis=0)
    for p0, p1, nrm in zip(v, w, body.edge_normals):
        q0, q1 = p0 + h * nrm, p1 + h * nrm
        rect = Polygon([p0, p1, q1, q0])
        rm = polygon_moments(rect)
        area += rm.volume
        first += rm.centroid * rm.volume
        M += rm.M
        surface += float(np.linalg.norm(q1 - q0))
        bfirst += 0.5 * (q0 + q1) * np.linalg.norm(q1 - q0)
        MB += _segment_second_matrix(q0, q1)
    for vert, phi0, span in zip(v, body.sector_start, body.sector_span):
        s_area, s_first, s_M, s_arc, s_bfirst, s_MB = _sector_integrals(vert, h, phi0, span)
        area += s_area
        first += s_first
        M += s_M
        surface += s_arc
        bfirst += s_bfirst
        MB += s_MB
    return _build_summary(2, area, first, M, surface, bfirst, MB)


def chebyshev_grid(count: int = 12, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Chebyshev-spaced sample points on [lo, hi], endpoints included."""
    k = np.arange(count)
    nodes = np.cos(np.pi * k / (count - 1))[::-1]
    return lo + 0.5 * (hi - lo) * (nodes + 1.0)


@dataclass(frozen=True, eq=False)
class ExpansionFit:
    """Least-squares polynomial fit of h -> J_axis(offset body at h)."""

    axis: int
    h_grid: np.ndarray
    coefficients: np.ndarray     # ascending powers, degree N+2
    residual: float              # max fit error relative to max sampled value


def fit_expansion(base: Polygon, axis: int, h_grid=None) -> ExpansionFit:
    """Fit the degree-4 polynomial J_axis(h) on the given offset grid.

    The fitted constant term reproduces J_axis of the base and the linear
    term its boundary moment I_axis; the residual certifies that no higher
    powers of h are present.
    """
    _require_convex(base)
    n = base.dimension
    degree = n + 2
    h = chebyshev_grid() if h_grid is None else np.asarray(h_grid, dtype=float)
    if len(np.unique(h)) < degree + 2:
        raise DegenerateShapeError(f"need at least {degree + 2} distinct grid points")
    span = float(np.max(h) - np.min(h))
    if span <= 0.0 or np.min(np.diff(np.sort(h))) < 1e-6 * span:
        raise DegenerateShapeError("grid points are too clustered for a stable fit")

    values = np.array([offset_moments(base, hv).J[axis] for hv in h])
    # Normal equations on a column-scaled Vandermonde basis in h/span.
    V = np.vander(h / span, degree + 1, increasing=True)
    col = np.linalg.norm(V, axis=0)
    Vs = V / col
    g = Vs.T @ Vs
    rhs = Vs.T @ values
    coef = np.linalg.solve(g, rhs) / col
    coef *= span ** -np.arange(degree + 1)
    fitted = np.vander(h, degree + 1, increasing=True) @ coef
    residual = float(np.max(np.abs(fitted - values)) / np.max(np.abs(values)))
    return ExpansionFit(axis=int(axis), h_grid=h, coefficients=coef, residual=residual)


@dataclass(frozen=True, eq=False)
class ConcavityReport:
    """Root-transformed offset functional sampled on a grid.

    ``g = functional(offset at h) ** exponent`` is concave in h for convex
    bases; ``second_differences`` holds the three-point second divided
    differences (nonpositive up to roundoff) and ``initial_slope`` the
    forward difference at h = 0, which stays above ``ball_slope`` (the exact
    slope of the same functional for a ball).
    """

    functional: str
    exponent: float
    h_grid: np.ndarray
    g_values: np.ndarray
    second_differences: np.ndarray
    initial_slope: float
    ball_slope: float

    def is_concave(self, tol: float = 1e-10) -> bool:
        return bool(np.all(self.second_differences <= tol))

    def slope_bound_holds(self, tol: float = 1e-6) -> bool:
        return self.initial_slope >= self.ball_slope - tol


def concavity_scan(base: Polygon, functional: str = "J", axis: int = 0,
                   h_grid=None) -> ConcavityReport:
    """Sample (J_axis)^(1/(N+2)) or volume^(1/N) over offsets and test concavity."""
    _require_convex(base)
    n = base.dimension
    h = chebyshev_grid() if h_grid is None else np.asarray(h_grid, dtype=float)
    h = np.sort(h)
    if functional == "J":
        exponent = 1.0 / (n + 2)
        values = np.array([offset_moments(base, hv).J[axis] for hv in h])
        ball_slope = (unit_ball_volume(n) / (n + 2)) ** exponent
    elif functional == "volume":
        exponent = 1.0 / n
        values = np.array([offset_moments(base, hv).volume for hv in h])
        ball_slope = unit_ball_volume(n) ** exponent
    else:
        raise ValueError("functional must be 'J' or 'volume'")
    g = values ** exponent
    d1 = np.diff(g) / np.diff(h)
    second = 2.0 * np.diff(d1) / (h[2:] - h[:-2])
    initial_slope = float(d1[0]) if h[0] == 0.0 else float((g[1] - g[0]) / (h[1] - h[0]))
    return ConcavityReport(
        functional=functional,
        exponent=exponent,
        h_grid=h,
        g_values=g,
        second_differences=second,
        initial_slope=initial_slope,
        ball_slope=float(ball_slope),
    )
