"""Seeded random shape generators used by tests, benchmarks and the CLI.

All generators take an explicit seed and are reproducible; every returned
shape passes its type's validity checks (with a bounded number of retries
for the perturbation-based generators).
"""

from __future__ import annotations

import math
from itertools import permutations

import numpy as np
from scipy.spatial import ConvexHull

from .errors import DegenerateShapeError
from .fourier import FourierBoundary, is_simple, signed_area
from .geometry import Polygon, SimplicialBody
from .ops import is_convex

__all__ = [
    "random_convex_polygons",
    "random_star_boundaries",
    "random_convex_boundaries",
    "random_simplicial_bodies",
    "kuhn_box_mesh",
    "generate_random",
]

_RETRY_CAP = 60


def random_convex_polygons(seed: int, count: int, points_low: int = 6,
                           points_high: int = 40, normalize_area: float | None = None,
                           ) -> list[Polygon]:
    """Convex hulls of uniform samples in the unit disc."""
    rng = np.random.default_rng(seed)
    shapes = []
    while len(shapes) < count:
        n = int(rng.integers(points_low, points_high + 1))
        r = np.sqrt(rng.uniform(0.0, 1.0, n))
        th = rng.uniform(0.0, 2.0 * np.pi, n)
        pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
        try:
            hull = ConvexHull(pts)
            poly = Polygon(pts[hull.vertices])
        except Exception:
            continue
        if normalize_area is not None:
            s = math.sqrt(normalize_area / polygon_area(poly))
            poly = poly.scaled(np.array([s, s]))
        shapes.append(poly)
    return shapes


def polygon_area(p: Polygon) -> float:
    return p.signed_area()


def _radial_boundary(radial_cos, radial_sin):
    """FourierBoundary of the curve r(theta)(cos theta, sin theta).

    ``radial_cos[k]``, ``radial_sin[k]`` are the cosine/sine amplitudes of
    r(theta) for wave numbers k = 0..m; products with the unit direction
    shift wave numbers by one, so the output order m+1 is exact.
    """
    m = len(radial_cos) - 1
    order = m + 1
    n = 8 * (order + 1)
    theta = 2.0 * np.pi * np.arange(n) / n
    k = np.arange(m + 1)
    rr = np.cos(np.outer(theta, k)) @ radial_cos + np.sin(np.outer(theta, k)) @ radial_sin
    return FourierBoundary.from_samples(rr * np.cos(theta), rr * np.sin(theta), order), rr


def random_star_boundaries(seed: int, count: int, modes: int = 6,
                           amplitude: float = 0.3, normalize_area: float | None = None,
                           require_nonconvex: bool = False) -> list[FourierBoundary]:
    """Star-shaped boundaries r(theta) = 1 + small random modes.

    The radial perturbation is rescaled so min r >= 0.2, which keeps the
    curve simple; with ``require_nonconvex`` convex draws are rejected.
    """
    rng = np.random.default_rng(seed)
    shapes = []
    attempts = 0
    while len(shapes) < count:
        attempts += 1
        if attempts > _RETRY_CAP * max(count, 1):
            raise DegenerateShapeError("star-boundary generator exceeded its retry cap")
        rc = np.zeros(modes + 1)
        rs = np.zeros(modes + 1)
        rc[0] = 1.0
        if modes >= 1:
            decay = 1.0 / np.arange(1, modes + 1)
            rc[1:] = rng.uniform(-1.0, 1.0, modes) * decay
            rs[1:] = rng.uniform(-1.0, 1.0, modes) * decay
            size = float(np.sum(np.abs(rc[1:])) + np.sum(np.abs(rs[1:])))
            if size > 0.0:
                rc[1:] *= amplitude / size
                rs[1:] *= amplitude / size
        fb, rr = _radial_boundary(rc, rs)
        if np.min(rr) < 0.2 or not is_simple(fb):
            continue
        if require_nonconvex and is_convex(fb):
            continue
        if normalize_area is not None:
            s = math.sqrt(normalize_area / signed_area(fb))
            fb = fb.scaled(np.array([s, s]))
        shapes.append(fb)
    return shapes


def random_convex_boundaries(seed: int, count: int, modes: int = 5,
                             amplitude: float = 0.12,
                             normalize_area: float | None = math.pi,
                             ) -> list[FourierBoundary]:
    """Smooth strictly convex boundaries built from a random support function.

    With support function h(theta) = 1 + perturbation the boundary is
    (h cos - h' sin, h sin + h' cos); strict convexity is h + h'' > 0, which
    is enforced by rejection.  The result is analytic, so spectral methods
    converge fast on these shapes.
    """
    rng = np.random.default_rng(seed)
    shapes = []
    attempts = 0
    while len(shapes) < count:
        attempts += 1
        if attempts > _RETRY_CAP * max(count, 1):
            raise DegenerateShapeError("convex-boundary generator exceeded its retry cap")
        m = modes
        hc = np.zeros(m + 1)
        hs = np.zeros(m + 1)
        hc[0] = 1.0
        # Wave number 1 in h is a translation; leave it out to stay centered.
        for k in range(2, m + 1):
            hc[k] = rng.uniform(-1.0, 1.0) * amplitude / k ** 2
            hs[k] = rng.uniform(-1.0, 1.0) * amplitude / k ** 2
        order = m + 1
        n = 16 * (order + 1)
        theta = 2.0 * np.pi * np.arange(n) / n
        k = np.arange(m + 1)
        ck = np.cos(np.outer(theta, k))
        sk = np.sin(np.outer(theta, k))
        h = ck @ hc + sk @ hs
        hp = -sk @ (k * hc) + ck @ (k * hs)
        hpp = -ck @ (k * k * hc) - sk @ (k * k * hs)
        if np.min(h + hpp) < 0.05:
            continue
        x = h * np.cos(theta) - hp * np.sin(theta)
        y = h * np.sin(theta) + hp * np.cos(theta)
        fb = FourierBoundary.from_samples(x, y, order)
        if normalize_area is not None:
            s = math.sqrt(normalize_area / signed_area(fb))
            fb = fb.scaled(np.array([s, s]))
        shapes.append(fb)
    return shapes


# ---------------------------------------------------------------------------
# Simplicial meshes of perturbed boxes
# ---------------------------------------------------------------------------


def _facet_outward_vector(pts: np.ndarray) -> np.ndarray:
    """Vector c with det([z, edges...]) = c . z; points along the facet's
    induced outward normal for the cone volume convention."""
    n = pts.shape[1]
    edges = (pts[1:] - pts[0]).T           # columns u_1 .. u_{N-1}
    c = np.empty(n)
    for i in range(n):
        m = np.zeros((n, n))
        m[i, 0] = 1.0
        m[:, 1:] = edges
        c[i] = np.linalg.det(m)
    return c


def _unit_cube_kuhn(n: int):
    """Kuhn triangulation of [0,1]^n: vertices, simplices, outward facets."""
    corners = np.array(np.meshgrid(*([[0.0, 1.0]] * n), indexing="ij"))
    verts = corners.reshape(n, -1).T
    index = {tuple(v): i for i, v in enumerate(verts)}

    simplices = []
    for perm in permutations(range(n)):
        chain = [np.zeros(n)]
        for axis in perm:
            nxt = chain[-1].copy()
            nxt[axis] = 1.0
            chain.append(nxt)
        rows = [index[tuple(p)] for p in chain]
        pts = verts[rows]
        vol = np.linalg.det(pts[1:] - pts[0])
        if vol < 0.0:
            rows[-1], rows[-2] = rows[-2], rows[-1]
        simplices.append(rows)

    facets = []
    sub = list(permutations(range(n - 1))) if n > 1 else [()]
    for axis in range(n):
        for side in (0.0, 1.0):
            outward = np.zeros(n)
            outward[axis] = 1.0 if side == 1.0 else -1.0
            others = [d for d in range(n) if d != axis]
            for perm in sub:
                chain = [np.zeros(n - 1)]
                for j in perm:
                    nxt = chain[-1].copy()
                    nxt[j] = 1.0
                    chain.append(nxt)
                rows = []
                for p in chain:
                    full = np.zeros(n)
                    full[axis] = side
                    for j, d in enumerate(others):
                        full[d] = p[j]
                    rows.append(index[tuple(full)])
                pts = verts[rows]
                if _facet_outward_vector(pts) @ outward < 0.0:
                    rows[-1], rows[-2] = rows[-2], rows[-1]
                facets.append(rows)
    return verts, np.array(simplices), np.array(facets)


def kuhn_box_mesh(n: int) -> SimplicialBody:
    """The unit box [0,1]^n as n! simplices with outward-oriented facets."""
    verts, simplices, facets = _unit_cube_kuhn(n)
    return SimplicialBody(verts, simplices, facets)


def random_simplicial_bodies(seed: int, count: int, dimension: int = 3,
                             amplitude: float = 0.12) -> list[SimplicialBody]:
    """Kuhn boxes with uniformly perturbed vertices; regenerated on failure."""
    rng = np.random.default_rng(seed)
    verts0, simplices, facets = _unit_cube_kuhn(dimension)
    shapes = []
    attempts = 0
    while len(shapes) < count:
        attempts += 1
        if attempts > _RETRY_CAP * max(count, 1):
            raise DegenerateShapeError("simplicial generator exceeded its retry cap")
        v = verts0 + rng.uniform(-amplitude, amplitude, verts0.shape)
        try:
            shapes.append(SimplicialBody(v, simplices, facets))
        except Exception:
            continue
    return shapes


def generate_random(kind: str, seed: int, count: int, **params):
    """CLI-facing dispatcher over the shape generators."""
    if kind == "convex-polygon":
        return random_convex_polygons(seed, count, **params)
    if kind == "star-fourier":
        return random_star_boundaries(seed, count, **params)
    if kind == "convex-fourier":
        return random_convex_boundaries(seed, count, **params)
    if kind == "simplicial-box-perturbation":
        return random_simplicial_bodies(seed, count, **params)
    raise ValueError(
        "kind must be one of convex-polygon, star-fourier, convex-fourier, "
        "simplicial-box-perturbation"
    )
