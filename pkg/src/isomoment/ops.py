"""Shape-generic operations: moments, canonical placement, affinities.

Dispatches on the concrete shape type so that callers (inequality checks,
eigenvalue bounds, the CLI) can treat polygons, simplicial bodies,
ellipsoids and Fourier boundaries uniformly.
"""

from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .errors import DegenerateShapeError, UnsupportedShapeError
from .fourier import FourierBoundary, quadrature_moments
from .geometry import (
    Ellipsoid,
    MomentSummary,
    Placement,
    Polygon,
    SimplicialBody,
    ellipsoid_moments,
    polygon_moments,
    simplicial_moments,
)

__all__ = [
    "moments",
    "canonical_placement",
    "apply_placement",
    "apply_affinity",
    "normalize_J",
    "is_convex",
    "shape_kind",
]

Shape = Polygon | SimplicialBody | Ellipsoid | FourierBoundary


def shape_kind(shape) -> str:
    if isinstance(shape, Polygon):
        return "polygon"
    if isinstance(shape, SimplicialBody):
        return "simplicial"
    if isinstance(shape, Ellipsoid):
        return "ellipsoid"
    if isinstance(shape, FourierBoundary):
        return "fourier"
    raise UnsupportedShapeError(f"unsupported shape type {type(shape).__name__}")


def moments(shape, boundary: bool = True) -> MomentSummary:
    """MomentSummary of any supported shape.

    Polygons and simplicial bodies use exact closed forms, ellipsoids the
    analytic ball/ellipse formulas, Fourier boundaries adaptive quadrature.
    """
    kind = shape_kind(shape)
    if kind == "polygon":
        return polygon_moments(shape)
    if kind == "simplicial":
        return simplicial_moments(shape)
    if kind == "ellipsoid":
        return ellipsoid_moments(shape, boundary=boundary)
    return quadrature_moments(shape, check_simple=False)


def apply_placement(shape, placement: Placement):
    return shape.translated(placement.translation).rotated(placement.rotation)


def _tied_groups(values: np.ndarray, rel_tol: float) -> list[list[int]]:
    groups: list[list[int]] = [[0]]
    scale = float(np.max(np.abs(values))) or 1.0
    for i in range(1, len(values)):
        if abs(values[i] - values[groups[-1][-1]]) <= rel_tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def _diagonalizing_rotation(S: np.ndarray, tie_rel_tol: float = 1e-9) -> np.ndarray:
    """Orthogonal Q with Q S Q^T diagonal, deterministically closest to identity.

    Within eigenvalue groups tied to ``tie_rel_tol`` the eigenbasis is free;
    it is re-anchored to the coordinate axes before the discrete search over
    axis permutations and sign flips.
    """
    n = S.shape[0]
    evals, V = np.linalg.eigh(0.5 * (S + S.T))
    for group in _tied_groups(evals, tie_rel_tol):
        if len(group) == 1:
            continue
        block = V[:, group]
        proj = block @ block.T               # projector onto the tied eigenspace
        anchored, r = np.linalg.qr(proj[:, group])
        if np.min(np.abs(np.diag(r))) > 1e-8:
            V[:, group] = anchored
    best = None
    best_dist = np.inf
    for perm in permutations(range(n)):
        W = V[:, perm]
        for signs in product((1.0, -1.0), repeat=n):
            R = (W * np.asarray(signs)).T
            if np.linalg.det(R) < 0.0:
                continue
            dist = float(np.linalg.norm(R - np.eye(n)))
            if dist < best_dist - 1e-12:
                best_dist = dist
                best = R
    return best


def canonical_placement(shape, mode: str = "volume", rotate: bool = False):
    """Center the shape and optionally rotate it to principal boundary axes.

    ``mode='volume'`` puts the volume centroid at the origin, ``'boundary'``
    the boundary centroid.  With ``rotate=True`` the boundary second-moment
    matrix of the centered shape is diagonalized; ties are broken toward the
    identity rotation.  Returns ``(new_shape, placement)`` with
    ``x' = rotation @ (x + translation)``.
    """
    need_boundary = mode == "boundary" or rotate
    m = moments(shape, boundary=need_boundary)
    if mode == "volume":
        t = -m.centroid
    elif mode == "boundary":
        if m.boundary_centroid is None:
            raise UnsupportedShapeError("shape has no boundary moments to center on")
        t = -m.boundary_centroid
    else:
        raise ValueError(f"unknown centering mode {mode!r}")
    centered = shape.translated(t)
    n = len(t)
    if not rotate:
        return centered, Placement(t, np.eye(n))
    mc = moments(centered)
    if mc.M_boundary is None:
        raise UnsupportedShapeError("shape has no boundary second moments to diagonalize")
    q = _diagonalizing_rotation(mc.M_boundary)
    return centered.rotated(q), Placement(t, q)


def apply_affinity(shape, t):
    """Coordinatewise scaling x_k -> t_k x_k with strictly positive factors."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise DegenerateShapeError("affinity scale factors must be positive")
    return shape.scaled(t)


def normalize_J(shape):
    """Volume-preserving affinity equalizing all axis moments J_k.

    Chooses t_k^2 = (prod_j J_j)^(1/N) / J_k, which has unit product, so the
    image satisfies J_k = (prod J)^(1/N) for every axis.  Returns ``(t, image)``.
    """
    m = moments(shape, boundary=False)
    J = m.J
    if np.any(J <= 0.0):
        raise DegenerateShapeError("normalize_J needs strictly positive axis moments")
    geo = float(np.prod(J)) ** (1.0 / len(J))
    t = np.sqrt(geo / J)
    return t, apply_affinity(shape, t)


def is_convex(shape, rel_tol: float = 1e-9) -> bool:
    kind = shape_kind(shape)
    if kind == "polygon":
        return shape.is_convex()
    if kind == "ellipsoid":
        return True
    if kind == "fourier":
        from .fourier import evaluate

        n = max(256, 16 * shape.order)
        pts, _ = evaluate(shape, 2.0 * np.pi * np.arange(n) / n)
        e = np.roll(pts, -1, axis=0) - pts
        cr = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        scale = float(np.max(np.abs(cr))) or 1.0
        return bool(np.all(cr >= -rel_tol * scale))
    # Simplicial: convex iff the convex hull of the vertices has the same volume.
    from scipy.spatial import ConvexHull

    vols = shape.signed_simplex_volumes()
    total = float(np.sum(vols))
    hull = ConvexHull(shape.vertices)
    return bool(abs(hull.volume - total) <= rel_tol * max(hull.volume, total))
