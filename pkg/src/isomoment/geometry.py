"""Exact moment functionals for polygons, simplicial bodies, and ellipsoids.

All moments are taken about the coordinate planes through the origin:
``J[k]`` is the integral of x_k^2 over the body, ``I[k]`` the same integral
over the boundary with respect to surface measure.  Shapes are plain
immutable containers; every computation is a pure function of its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateShapeError, OrientationError, UnsupportedShapeError

__all__ = [
    "MomentSummary",
    "Placement",
    "Polygon",
    "SimplicialBody",
    "Ellipsoid",
    "Ball",
    "unit_ball_volume",
    "ball_volume_moment",
    "ball_boundary_moment",
    "ball_surface_measure",
    "polygon_moments",
    "simplicial_moments",
    "ellipsoid_moments",
    "regular_polygon",
]


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n, pi^(n/2) / Gamma(n/2 + 1)."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def ball_volume_moment(n: int, radius: float) -> float:
    """Integral of x_k^2 over the ball of given radius (any axis k)."""
    return radius ** (n + 2) * unit_ball_volume(n) / (n + 2)


def ball_boundary_moment(n: int, radius: float) -> float:
    """Integral of x_k^2 over the sphere of given radius (any axis k)."""
    return unit_ball_volume(n) * radius ** (n + 1)


def ball_surface_measure(n: int, radius: float) -> float:
    """Surface measure of the sphere of given radius in R^n."""
    return n * unit_ball_volume(n) * radius ** (n - 1)


@dataclass(frozen=True, eq=False)
class Placement:
    """Rigid motion x' = rotation @ (x + translation)."""

    translation: np.ndarray
    rotation: np.ndarray

    def apply(self, points: np.ndarray) -> np.ndarray:
        return (np.asarray(points, dtype=float) + self.translation) @ self.rotation.T

    @classmethod
    def identity(cls, n: int) -> "Placement":
        return cls(np.zeros(n), np.eye(n))


@dataclass(frozen=True, eq=False)
class MomentSummary:
    """All scalar moment functionals of one shape, about the origin.

    Boundary quantities (``surface``, ``I`` and friends) are ``None`` when
    the shape admits no supported boundary-moment computation.
    """

    dimension: int
    volume: float
    centroid: np.ndarray
    J: np.ndarray          # J[k] = integral of x_k^2 over the body
    M: np.ndarray          # M[i, j] = integral of x_i x_j over the body
    surface: float | None = None
    boundary_centroid: np.ndarray | None = None
    I: np.ndarray | None = None            # I[k] = integral of x_k^2 over the boundary
    M_boundary: np.ndarray | None = None   # boundary counterpart of M

    @property
    def J0(self) -> float:
        return float(np.sum(self.J))

    @property
    def I0(self) -> float | None:
        return None if self.I is None else float(np.sum(self.I))

    @property
    def J_prod(self) -> float:
        return float(np.prod(self.J))

    @property
    def I_prod(self) -> float | None:
        return None if self.I is None else float(np.prod(self.I))

    @property
    def D(self) -> float:
        """Determinant of the second-moment matrix M."""
        return float(np.linalg.det(self.M))

    def has_boundary(self) -> bool:
        return self.I is not None


def _build_summary(dim, volume, first, M, surface=None, bfirst=None, MB=None):
    """Assemble a MomentSummary from raw integrals, enforcing invariants."""
    if volume <= 0.0:
        raise DegenerateShapeError(f"nonpositive volume {volume}")
    M = 0.5 * (M + M.T)
    J = np.diag(M).copy()
    if np.any(J <= 0.0):
        raise DegenerateShapeError("nonpositive axis moment: flat body")
    kw = {}
    if surface is not None:
        if surface <= 0.0:
            raise DegenerateShapeError(f"nonpositive surface measure {surface}")
        MB = 0.5 * (MB + MB.T)
        kw = dict(
            surface=float(surface),
            boundary_centroid=bfirst / surface,
            I=np.diag(MB).copy(),
            M_boundary=MB,
        )
    return MomentSummary(
        dimension=dim,
        volume=float(volume),
        centroid=first / volume,
        J=J,
        M=M,
        **kw,
    )


# ---------------------------------------------------------------------------
# Polygons
# ---------------------------------------------------------------------------


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True, eq=False)
class Polygon:
    """Simple planar polygon, normalized to counterclockwise orientation."""

    vertices: np.ndarray

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise DegenerateShapeError("vertices must be an (n, 2) array")
        if len(v) < 3:
            raise DegenerateShapeError("polygon needs at least 3 vertices")
        scale = float(np.max(np.abs(v))) or 1.0
        gaps = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        if np.any(gaps < 1e-12 * scale):
            raise DegenerateShapeError("two consecutive vertices coincide")
        area = _signed_area(v)
        if abs(area) < 1e-12 * scale * scale:
            raise DegenerateShapeError("polygon has (near) zero area")
        if area < 0.0:
            v = v[::-1].copy()
        object.__setattr__(self, "vertices", v)

    @property
    def dimension(self) -> int:
        return 2

    def signed_area(self) -> float:
        return _signed_area(self.vertices)

    def translated(self, t) -> "Polygon":
        return Polygon(self.vertices + np.asarray(t, dtype=float))

    def rotated(self, q) -> "Polygon":
        return Polygon(self.vertices @ np.asarray(q, dtype=float).T)

    def scaled(self, t) -> "Polygon":
        return Polygon(self.vertices * np.asarray(t, dtype=float))

    def is_convex(self, rel_tol: float = 1e-12) -> bool:
        v = self.vertices
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        scale = float(np.max(np.abs(cross))) or 1.0
        return bool(np.all(cross >= -rel_tol * scale))


def regular_polygon(sides: int, circumradius: float = 1.0, center=(0.0, 0.0)) -> Polygon:
    ang = 2.0 * np.pi * np.arange(sides) / sides
    v = circumradius * np.column_stack([np.cos(ang), np.sin(ang)])
    return Polygon(v + np.asarray(center, dtype=float))


def _segment_second_matrix(p0: np.ndarray, p1: np.ndarray) -> np.ndarray:
    """Integral of x x^T over the segment p0-p1 (line measure), any dimension."""
    length = float(np.linalg.norm(p1 - p0))
    s = p0 + p1
    return (length / 6.0) * (np.outer(s, s) + np.outer(p0, p0) + np.outer(p1, p1))


def polygon_moments(p: Polygon) -> MomentSummary:
    """Exact area, boundary, first and second moments of a simple polygon.

    Area integrals use the shoelace (Green's theorem) edge formulas; boundary
    integrals are closed-form per-edge line integrals.
    """
    v = p.vertices
    w = np.roll(v, -1, axis=0)
    x0, y0 = v[:, 0], v[:, 1]
    x1, y1 = w[:, 0], w[:, 1]
    cross = x0 * y1 - x1 * y0

    area = 0.5 * float(np.sum(cross))
    fx = float(np.sum((x0 + x1) * cross)) / 6.0
    fy = float(np.sum((y0 + y1) * cross)) / 6.0
    jxx = float(np.sum((x0 * x0 + x0 * x1 + x1 * x1) * cross)) / 12.0
    jyy = float(np.sum((y0 * y0 + y0 * y1 + y1 * y1) * cross)) / 12.0
    jxy = float(np.sum((x0 * (2.0 * y0 + y1) + x1 * (y0 + 2.0 * y1)) * cross)) / 24.0
    M = np.array([[jxx, jxy], [jxy, jyy]])

    lengths = np.linalg.norm(w - v, axis=1)
    surface = float(np.sum(lengths))
    bfirst = 0.5 * (v + w).T @ lengths
    MB = np.zeros((2, 2))
    for p0, p1 in zip(v, w):
        MB += _segment_second_matrix(p0, p1)

    return _build_summary(2, area, np.array([fx, fy]), M, surface, bfirst, MB)


# ---------------------------------------------------------------------------
# Simplicial bodies in R^N
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SimplicialBody:
    """Body in R^N given by volume simplices and outward-oriented boundary facets.

    ``simplices`` holds index rows of N+1 vertices each; their signed volumes
    must sum to the (positive) body volume, so both disjoint partitions and
    signed cone decompositions are accepted.  ``facets`` holds index rows of
    N vertices each, ordered so the cone-from-origin volumes reproduce the
    body volume (outward orientation).
    """

    vertices: np.ndarray
    simplices: np.ndarray
    facets: np.ndarray

    def __init__(self, vertices, simplices, facets):
        v = np.asarray(vertices, dtype=float)
        s = np.asarray(simplices, dtype=int)
        f = np.asarray(facets, dtype=int)
        if v.ndim != 2 or v.shape[1] < 2:
            raise DegenerateShapeError("vertices must be an (m, N) array with N >= 2")
        n = v.shape[1]
        if s.ndim != 2 or s.shape[1] != n + 1:
            raise DegenerateShapeError(f"simplices must have {n + 1} vertex indices each")
        if f.ndim != 2 or f.shape[1] != n:
            raise DegenerateShapeError(f"facets must have {n} vertex indices each")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "simplices", s)
        object.__setattr__(self, "facets", f)
        self._validate()

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    def _validate(self):
        n = self.dimension
        scale = float(np.max(np.abs(self.vertices))) or 1.0
        vols = self.signed_simplex_volumes()
        if np.any(np.abs(vols) < 1e-12 * scale ** n):
            raise DegenerateShapeError("degenerate simplex with (near) zero volume")
        total = float(np.sum(vols))
        if total <= 0.0:
            raise DegenerateShapeError("signed simplex volumes sum to a nonpositive value")
        measures = self.facet_measures()
        if float(np.sum(measures)) <= 0.0:
            raise DegenerateShapeError("total facet measure is nonpositive")
        cone = self._facet_cone_volume()
        if abs(cone - total) > 1e-9 * total:
            raise OrientationError(
                f"facet orientation inconsistent: cone volume {cone:.12g} "
                f"vs simplex volume {total:.12g}"
            )

    def signed_simplex_volumes(self) -> np.ndarray:
        pts = self.vertices[self.simplices]          # (s, N+1, N)
        edges = pts[:, 1:, :] - pts[:, :1, :]        # (s, N, N)
        return np.linalg.det(edges) / math.factorial(self.dimension)

    def facet_measures(self) -> np.ndarray:
        pts = self.vertices[self.facets]             # (f, N, N)
        edges = pts[:, 1:, :] - pts[:, :1, :]        # (f, N-1, N)
        gram = edges @ np.transpose(edges, (0, 2, 1))
        det = np.linalg.det(gram)
        det = np.where(det > 0.0, det, 0.0)
        return np.sqrt(det) / math.factorial(self.dimension - 1)

    def _facet_cone_volume(self) -> float:
        # Cones taken from the vertex centroid, not the origin, so flipped
        # facets are caught even when their plane passes through the origin.
        ref = self.vertices.mean(axis=0)
        pts = self.vertices[self.facets] - ref       # columns = facet vertices
        mats = np.transpose(pts, (0, 2, 1))
        return float(np.sum(np.linalg.det(mats))) / math.factorial(self.dimension)

    def translated(self, t) -> "SimplicialBody":
        return SimplicialBody(self.vertices + np.asarray(t, dtype=float),
                              self.simplices, self.facets)

    def rotated(self, q) -> "SimplicialBody":
        return SimplicialBody(self.vertices @ np.asarray(q, dtype=float).T,
                              self.simplices, self.facets)

    def scaled(self, t) -> "SimplicialBody":
        return SimplicialBody(self.vertices * np.asarray(t, dtype=float),
                              self.simplices, self.facets)


def simplicial_moments(b: SimplicialBody) -> MomentSummary:
    """Exact moments via per-simplex and per-facet closed forms.

    For a d-simplex with vertex rows W, barycentric integration gives

        integral of x x^T  =  |S| / ((d+1)(d+2)) * (sum(W) sum(W)^T + W^T W)

    which is applied with signed volumes for the body and unsigned measures
    for the facets.
    """
    n = b.dimension
    vols = b.signed_simplex_volumes()
    pts = b.vertices[b.simplices]                     # (s, N+1, N)
    sums = pts.sum(axis=1)                            # (s, N)
    volume = float(np.sum(vols))
    first = vols @ sums / (n + 1)
    outer_sum = np.einsum("si,sj->sij", sums, sums)
    outer_pts = np.einsum("ski,skj->sij", pts, pts)
    M = np.einsum("s,sij->ij", vols, outer_sum + outer_pts) / ((n + 1) * (n + 2))

    measures = b.facet_measures()
    fpts = b.vertices[b.facets]                       # (f, N, N)
    fsums = fpts.sum(axis=1)
    surface = float(np.sum(measures))
    bfirst = measures @ fsums / n
    fouter_sum = np.einsum("fi,fj->fij", fsums, fsums)
    fouter_pts = np.einsum("fki,fkj->fij", fpts, fpts)
    MB = np.einsum("f,fij->ij", measures, fouter_sum + fouter_pts) / (n * (n + 1))

    return _build_summary(n, volume, first, M, surface, bfirst, MB)


# ---------------------------------------------------------------------------
# Ellipsoids
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Axis-aligned ellipsoid in R^N."""

    center: np.ndarray
    semi_axes: np.ndarray

    def __init__(self, semi_axes, center=None):
        a = np.atleast_1d(np.asarray(semi_axes, dtype=float))
        if len(a) < 2:
            raise DegenerateShapeError("ellipsoid needs dimension >= 2")
        if np.any(a <= 0.0):
            raise DegenerateShapeError("semi-axes must be strictly positive")
        c = np.zeros(len(a)) if center is None else np.asarray(center, dtype=float)
        if c.shape != a.shape:
            raise DegenerateShapeError("center and semi-axes dimensions differ")
        object.__setattr__(self, "semi_axes", a)
        object.__setattr__(self, "center", c)

    @property
    def dimension(self) -> int:
        return len(self.semi_axes)

    def is_ball(self, rel_tol: float = 1e-12) -> bool:
        a = self.semi_axes
        return bool(np.max(a) - np.min(a) <= rel_tol * np.max(a))

    def translated(self, t) -> "Ellipsoid":
        return Ellipsoid(self.semi_axes, self.center + np.asarray(t, dtype=float))

    def scaled(self, t) -> "Ellipsoid":
        t = np.asarray(t, dtype=float)
        return Ellipsoid(self.semi_axes * t, self.center * t)

    def rotated(self, q) -> "Ellipsoid":
        """Rotation is supported only when it maps axes to (signed) axes."""
        q = np.asarray(q, dtype=float)
        perm = np.abs(q)
        ok = np.allclose(perm.sum(axis=0), 1.0, atol=1e-10) \
            and np.allclose(perm.sum(axis=1), 1.0, atol=1e-10) \
            and np.all((perm < 1e-10) | (np.abs(perm - 1.0) < 1e-10))
        if not ok:
            raise UnsupportedShapeError("ellipsoid rotation must be a signed axis permutation")
        return Ellipsoid(np.round(perm) @ self.semi_axes, q @ self.center)


class Ball(Ellipsoid):
    """Convenience constructor for the N-ball."""

    def __init__(self, dimension: int, radius: float = 1.0, center=None):
        super().__init__(np.full(dimension, float(radius)), center)


def _ellipse_boundary_integrals(e: Ellipsoid) -> tuple[float, np.ndarray, np.ndarray]:
    """Perimeter, first and second boundary moments of a centered 2D ellipse.

    Periodic trapezoidal quadrature on the angle parametrization, panel count
    doubled until the results stabilize to 1e-13 relative.
    """
    ax, ay = e.semi_axes
    prev = None
    n = 64
    while True:
        t = 2.0 * np.pi * np.arange(n) / n
        x, y = ax * np.cos(t), ay * np.sin(t)
        speed = np.hypot(-ax * np.sin(t), ay * np.cos(t))
        w = (2.0 * np.pi / n) * speed
        per = float(np.sum(w))
        first = np.array([np.sum(x * w), np.sum(y * w)])
        mb = np.array([
            [np.sum(x * x * w), np.sum(x * y * w)],
            [np.sum(x * y * w), np.sum(y * y * w)],
        ])
        cur = np.concatenate([[per], first, mb.ravel()])
        if prev is not None and np.max(np.abs(cur - prev)) <= 1e-13 * max(per, 1.0):
            break
        if n >= 1 << 16:
            break
        prev = cur
        n *= 2
    return per, first, mb


def ellipsoid_moments(e: Ellipsoid, boundary: bool = True) -> MomentSummary:
    """Closed-form volume moments of an ellipsoid; boundary moments where supported.

    Volume moments follow from the ball formulas and coordinate scaling.
    Boundary moments are analytic for balls, quadrature-based for planar
    ellipses, and unsupported for non-spherical ellipsoids with N >= 3.
    """
    n = e.dimension
    axes = e.semi_axes
    volume = unit_ball_volume(n) * float(np.prod(axes))
    # Moments of the centered ellipsoid, then the parallel-axis shift.
    J_centered = volume * axes ** 2 / (n + 2)
    M = np.diag(J_centered) + volume * np.outer(e.center, e.center)
    first = volume * e.center

    if not boundary:
        return _build_summary(n, volume, first, M)

    if e.is_ball():
        r = float(np.mean(axes))
        surface = ball_surface_measure(n, r)
        i_centered = np.full(n, ball_boundary_moment(n, r))
        MB = np.diag(i_centered) + surface * np.outer(e.center, e.center)
        bfirst = surface * e.center
    elif n == 2:
        centered = Ellipsoid(axes)
        surface, bf0, MB0 = _ellipse_boundary_integrals(centered)
        MB = MB0 + surface * np.outer(e.center, e.center) \
            + np.outer(e.center, bf0) + np.outer(bf0, e.center)
        bfirst = bf0 + surface * e.center
    else:
        raise UnsupportedShapeError(
            "boundary moments of a non-spherical ellipsoid are supported only in 2D; "
            "pass boundary=False for volume moments"
        )
    return _build_summary(n, volume, first, M, surface, bfirst, MB)
