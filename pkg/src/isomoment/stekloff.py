"""Upper bounds and converging spectra for the Stekloff eigenvalue problem.

The problem is: harmonic u in the domain with du/dn = p * u on the boundary;
its eigenvalues 0 = p_1 < p_2 <= p_3 <= ... are bounded from above by the
ordered roots of det(A - p B) = 0 over any trial space of zero-boundary-mean
H^1 functions, where A collects Dirichlet energies and B boundary mass
(the Poincare variational principle).  Harmonic polynomial trial spaces make
A assemblable from boundary data alone and converge spectrally on smooth
domains; the coordinate functions alone already give the closed-form bounds
|volume| / I_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConditioningError, HypothesisViolationError, UnsupportedShapeError
from .fourier import evaluate
from .geometry import unit_ball_volume
from .ops import canonical_placement, is_convex, moments, shape_kind

__all__ = [
    "RayleighPair",
    "StekloffBounds",
    "BallSpectrum",
    "SpectralChainReport",
    "ball_spectrum",
    "coordinate_bounds",
    "rayleigh_pair",
    "converge_spectrum",
    "spectral_chain_check",
]


# ---------------------------------------------------------------------------
# Ball spectrum (separation of variables)
# ---------------------------------------------------------------------------


def _harmonic_dimension(n: int, degree: int) -> int:
    """Dimension of the space of degree-``degree`` spherical harmonics in R^n."""
    if degree == 0:
        return 1
    if degree == 1:
        return n
    return math.comb(n + degree - 1, degree) - math.comb(n + degree - 3, degree - 2)


@dataclass(frozen=True, eq=False)
class BallSpectrum:
    dimension: int
    radius: float
    eigenvalues: np.ndarray


def ball_spectrum(n: int, radius: float, count: int) -> BallSpectrum:
    """First ``count`` Stekloff eigenvalues of the ball: 0, then m/R with
    the multiplicity of degree-m harmonics."""
    if n < 2 or radius <= 0.0:
        raise ValueError("need dimension >= 2 and positive radius")
    values = [0.0]
    degree = 1
    while len(values) < count:
        values.extend([degree / radius] * _harmonic_dimension(n, degree))
        degree += 1
    return BallSpectrum(n, float(radius), np.array(values[:count]))


# ---------------------------------------------------------------------------
# Boundary quadrature rules
# ---------------------------------------------------------------------------


def _boundary_rule(shape, min_panels: int = 512):
    """(points, outward unit normals, weights) for boundary integrals.

    Fourier boundaries use the periodic trapezoidal rule, polygons per-edge
    Gauss-Legendre of degree 16.
    """
    kind = shape_kind(shape)
    if kind == "fourier":
        n = max(min_panels, 16 * shape.order)
        pts, tan = evaluate(shape, 2.0 * np.pi * np.arange(n) / n)
        speed = np.hypot(tan[:, 0], tan[:, 1])
        normals = np.column_stack([tan[:, 1], -tan[:, 0]]) / speed[:, None]
        weights = (2.0 * np.pi / n) * speed
        return pts, normals, weights
    if kind == "polygon":
        nodes, gw = np.polynomial.legendre.leggauss(16)
        v = shape.vertices
        w = np.roll(v, -1, axis=0)
        pts, normals, weights = [], [], []
        for p0, p1 in zip(v, w):
            d = p1 - p0
            length = float(np.linalg.norm(d))
            mids = p0 + np.outer(0.5 * (nodes + 1.0), d)
            nrm = np.array([d[1], -d[0]]) / length
            pts.append(mids)
            normals.append(np.tile(nrm, (len(nodes), 1)))
            weights.append(0.5 * length * gw)
        return np.vstack(pts), np.vstack(normals), np.concatenate(weights)
    raise UnsupportedShapeError("Stekloff bounds need a 2D polygon or Fourier boundary")


def _harmonic_basis(pts: np.ndarray, degree: int, scale: float):
    """Real and imaginary parts of ((x+iy)/scale)^m, m=1..degree, with gradients."""
    z = (pts[:, 0] + 1j * pts[:, 1]) / scale
    values = np.empty((len(pts), 2 * degree))
    grads = np.empty((len(pts), 2 * degree, 2))
    for m in range(1, degree + 1):
        zm = z ** m
        w = m * z ** (m - 1) / scale
        j = 2 * (m - 1)
        values[:, j] = zm.real
        values[:, j + 1] = zm.imag
        grads[:, j, 0] = w.real
        grads[:, j, 1] = -w.imag
        grads[:, j + 1, 0] = w.imag
        grads[:, j + 1, 1] = w.real
    return values, grads


@dataclass(frozen=True, eq=False)
class RayleighPair:
    """Assembled trial-space matrices and the ordered roots of det(A - pB) = 0."""

    size: int
    A: np.ndarray
    B: np.ndarray
    roots: np.ndarray
    mean_residual: float    # largest |boundary mean| of a trial function


def rayleigh_pair(shape, degree: int, scale: float | None = None,
                  min_panels: int = 512) -> RayleighPair:
    """Assemble and solve the harmonic-polynomial trial-space pencil.

    The shape must already be centered on its boundary centroid (use
    :func:`isomoment.ops.canonical_placement`); constants are projected out
    of every trial function so the zero-boundary-mean admissibility
    condition holds, and A is assembled from boundary data by Green's
    identity (valid because the basis is harmonic).
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    pts, normals, weights = _boundary_rule(shape, min_panels)
    if scale is None:
        scale = float(np.max(np.hypot(pts[:, 0], pts[:, 1])))
    values, grads = _harmonic_basis(pts, degree, scale)
    total = float(np.sum(weights))
    means = weights @ values / total
    centered = values - means
    dn = np.einsum("pkd,pd->pk", grads, normals)

    A = centered.T @ (weights[:, None] * dn)
    A = 0.5 * (A + A.T)
    B = centered.T @ (weights[:, None] * centered)
    B = 0.5 * (B + B.T)

    # Unit boundary mass per trial function keeps the pencil well scaled.
    d = np.sqrt(np.diag(B))
    if np.any(d <= 0.0):
        raise ConditioningError("trial function with vanishing boundary mass")
    A = A / np.outer(d, d)
    B = B / np.outer(d, d)
    try:
        roots = scipy.linalg.eigh(A, B, eigvals_only=True)
    except (scipy.linalg.LinAlgError, np.linalg.LinAlgError) as exc:
        raise ConditioningError(
            "generalized eigensolve failed; trial space too large for this boundary",
            condition_estimate=float(np.linalg.cond(B)),
        ) from exc
    mean_residual = float(np.max(np.abs((weights @ centered))) / math.sqrt(total))
    return RayleighPair(2 * degree, A, B, np.sort(roots), mean_residual)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StekloffBounds:
    """Ordered upper bounds for the first nonzero Stekloff eigenvalues."""

    method: str
    bounds: np.ndarray
    volume: float
    boundary_moments: np.ndarray     # I_k of the centered, rotated shape
    history: tuple = ()              # (degree, bounds) pairs for sweeps
    converged: bool = True
    achieved_tol: float = 0.0

    @property
    def product_first_n(self) -> float:
        n = len(self.boundary_moments)
        return float(np.prod(self.bounds[:n]))


def coordinate_bounds(shape) -> StekloffBounds:
    """Closed-form bounds |volume| / I_k from the coordinate trial functions.

    The shape is centered on its boundary centroid and rotated to principal
    boundary axes first, which makes the coordinate functions admissible and
    the pencil diagonal.
    """
    placed, _ = canonical_placement(shape, mode="boundary", rotate=True)
    m = moments(placed)
    bounds = np.sort(m.volume / m.I)
    return StekloffBounds(
        method="coordinate",
        bounds=bounds,
        volume=m.volume,
        boundary_moments=m.I.copy(),
    )


def converge_spectrum(shape, max_degree: int = 18, tol: float = 1e-10,
                      count: int | None = None) -> StekloffBounds:
    """Sweep the harmonic trial-space degree until the leading bounds settle.

    Bounds are non-increasing in the degree (nested trial spaces), so the
    sweep stops once the first ``count`` of them change by less than ``tol``
    relative between consecutive degrees.
    """
    placed, _ = canonical_placement(shape, mode="boundary", rotate=True)
    m = moments(placed)
    n_lead = count or (placed.dimension + 1)
    history = []
    prev = None
    converged = False
    achieved = np.inf
    for degree in range(1, max_degree + 1):
        pair = rayleigh_pair(placed, degree)
        history.append((degree, pair.roots.copy()))
        if prev is not None and len(prev) >= n_lead:
            lead_prev, lead = prev[:n_lead], pair.roots[:n_lead]
            achieved = float(np.max(np.abs(lead - lead_prev) / np.abs(lead_prev)))
            if achieved <= tol:
                converged = True
                break
        prev = pair.roots
    return StekloffBounds(
        method=f"harmonic:{history[-1][0]}",
        bounds=history[-1][1],
        volume=m.volume,
        boundary_moments=m.I.copy(),
        history=tuple(history),
        converged=converged,
        achieved_tol=0.0 if converged else achieved,
    )


# ---------------------------------------------------------------------------
# The eigenvalue-product chain and the reciprocal-sum comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpectralChainReport:
    """Links of the eigenvalue-product chain for one convex shape.

    ``product_spectrum <= product_bound = volume^N / prod(I_k) <= ball_product``
    where ``ball_product = omega_N / volume`` is the value for the ball of
    equal volume; ``reciprocal_sum >= ball_reciprocal_sum`` is the companion
    lower bound for the sum of reciprocal eigenvalues.  Spectral entries are
    ``None`` when no 2D spectrum solver applies (N >= 3).
    """

    dimension: int
    volume: float
    product_bound: float
    ball_product: float
    product_spectrum: float | None = None
    reciprocal_sum: float | None = None
    ball_reciprocal_sum: float | None = None
    eigenvalues: np.ndarray | None = None

    @property
    def chain_margins(self) -> tuple:
        links = []
        if self.product_spectrum is not None:
            links.append(self.product_bound - self.product_spectrum)
        links.append(self.ball_product - self.product_bound)
        return tuple(links)

    def holds(self, tol: float = 1e-9) -> bool:
        scale = max(self.ball_product, 1e-300)
        ok = all(m >= -tol * scale for m in self.chain_margins)
        if self.reciprocal_sum is not None:
            ok = ok and (self.reciprocal_sum - self.ball_reciprocal_sum
                         >= -tol * self.ball_reciprocal_sum)
        return ok


def spectral_chain_check(shape, max_degree: int = 18, tol: float = 1e-10) -> SpectralChainReport:
    """Verify the eigenvalue-product chain and the reciprocal-sum bound.

    Convexity is a hypothesis of the product chain and is enforced.  For 2D
    shapes the first two nonzero eigenvalues come from the converged
    harmonic sweep; in higher dimensions only the moment part of the chain
    is evaluated.
    """
    if not is_convex(shape):
        raise HypothesisViolationError("the eigenvalue-product chain assumes a convex shape")
    n = shape.dimension
    cb = coordinate_bounds(shape)
    volume = cb.volume
    product_bound = volume ** n / float(np.prod(cb.boundary_moments))
    ball_product = unit_ball_volume(n) / volume
    if n != 2:
        return SpectralChainReport(n, volume, product_bound, ball_product)
    sb = converge_spectrum(shape, max_degree=max_degree, tol=tol)
    eig = sb.bounds[:2]
    r_star = (volume / unit_ball_volume(n)) ** (1.0 / n)
    return SpectralChainReport(
        dimension=n,
        volume=volume,
        product_bound=product_bound,
        ball_product=ball_product,
        product_spectrum=float(np.prod(eig)),
        reciprocal_sum=float(np.sum(1.0 / eig)),
        ball_reciprocal_sum=n * r_star,
        eigenvalues=sb.bounds.copy(),
    )
