"""Truncated Fourier representation of closed planar boundaries.

A boundary is the curve sigma -> (x(sigma), y(sigma)) on [0, 2*pi) with

    x(sigma) = a0/2 + sum_k (a[k] cos(k sigma) + ap[k] sin(k sigma))
    y(sigma) = b0/2 + sum_k (b[k] cos(k sigma) + bp[k] sin(k sigma))

When the parametrization is proportional to arc length, perimeter, area and
the boundary moments reduce to quadratic forms of the coefficients
(Parseval identities); for general parametrizations everything is computed
by spectrally accurate periodic trapezoidal quadrature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstantSpeedError,
    DegenerateShapeError,
    NonSimpleCurveError,
    OrientationError,
)
from .geometry import MomentSummary, _build_summary

__all__ = [
    "FourierBoundary",
    "ParsevalSummary",
    "TwoModeSpeedCoefficients",
    "QuadratureInfo",
    "LagrangeReport",
    "evaluate",
    "quadrature_moments",
    "parseval_quantities",
    "constant_speed_residual",
    "reparametrize_constant_speed",
    "two_mode_speed_coefficients",
    "reconstruct_speed_squared",
    "lagrange_system",
    "is_simple",
]


@dataclass(frozen=True, eq=False)
class FourierBoundary:
    """Fourier coefficients of a closed curve, modes 1..K plus constant terms."""

    a0: float
    b0: float
    a: np.ndarray
    ap: np.ndarray
    b: np.ndarray
    bp: np.ndarray

    def __init__(self, a0, b0, a, ap, b, bp):
        a, ap, b, bp = (np.atleast_1d(np.asarray(c, dtype=float)) for c in (a, ap, b, bp))
        if not (len(a) == len(ap) == len(b) == len(bp)) or len(a) < 1:
            raise DegenerateShapeError("mode arrays must share a common length K >= 1")
        object.__setattr__(self, "a0", float(a0))
        object.__setattr__(self, "b0", float(b0))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "ap", ap)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "bp", bp)

    @property
    def order(self) -> int:
        return len(self.a)

    @property
    def dimension(self) -> int:
        return 2

    @classmethod
    def circle(cls, radius: float = 1.0, center=(0.0, 0.0), order: int = 1) -> "FourierBoundary":
        a = np.zeros(order)
        bp = np.zeros(order)
        a[0] = radius
        bp[0] = radius
        return cls(2.0 * center[0], 2.0 * center[1], a, np.zeros(order), np.zeros(order), bp)

    @classmethod
    def ellipse(cls, rx: float, ry: float, center=(0.0, 0.0), order: int = 1) -> "FourierBoundary":
        a = np.zeros(order)
        bp = np.zeros(order)
        a[0] = rx
        bp[0] = ry
        return cls(2.0 * center[0], 2.0 * center[1], a, np.zeros(order), np.zeros(order), bp)

    @classmethod
    def from_samples(cls, x, y, order: int) -> "FourierBoundary":
        """Project equispaced samples on [0, 2*pi) onto the first ``order`` modes."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        n = len(x)
        if order > (n - 1) // 2:
            raise ValueError(f"order {order} needs more than {2 * order} samples")
        fx = np.fft.rfft(x) / n
        fy = np.fft.rfft(y) / n
        k = slice(1, order + 1)
        return cls(
            2.0 * fx[0].real,
            2.0 * fy[0].real,
            2.0 * fx[k].real,
            -2.0 * fx[k].imag,
            2.0 * fy[k].real,
            -2.0 * fy[k].imag,
        )

    def coefficient_array(self) -> np.ndarray:
        """Pack as [a0, b0, a_1..a_K, ap_1..ap_K, b_1..b_K, bp_1..bp_K]."""
        return np.concatenate([[self.a0, self.b0], self.a, self.ap, self.b, self.bp])

    @classmethod
    def from_coefficient_array(cls, c: np.ndarray, order: int) -> "FourierBoundary":
        c = np.asarray(c, dtype=float)
        k = order
        return cls(c[0], c[1], c[2:2 + k], c[2 + k:2 + 2 * k],
                   c[2 + 2 * k:2 + 3 * k], c[2 + 3 * k:2 + 4 * k])

    def translated(self, t) -> "FourierBoundary":
        return FourierBoundary(self.a0 + 2.0 * t[0], self.b0 + 2.0 * t[1],
                               self.a, self.ap, self.b, self.bp)

    def rotated(self, q) -> "FourierBoundary":
        q = np.asarray(q, dtype=float)
        c0 = q @ np.array([self.a0, self.b0])
        cos_part = q @ np.vstack([self.a, self.b])
        sin_part = q @ np.vstack([self.ap, self.bp])
        return FourierBoundary(c0[0], c0[1], cos_part[0], sin_part[0],
                               cos_part[1], sin_part[1])

    def scaled(self, t) -> "FourierBoundary":
        tx, ty = float(t[0]), float(t[1])
        return FourierBoundary(tx * self.a0, ty * self.b0, tx * self.a, tx * self.ap,
                               ty * self.b, ty * self.bp)

    def reversed(self) -> "FourierBoundary":
        """Same point set traversed in the opposite direction."""
        return FourierBoundary(self.a0, self.b0, self.a, -self.ap, self.b, -self.bp)


def _mode_tables(fb: FourierBoundary, sigma: np.ndarray):
    k = np.arange(1, fb.order + 1)
    arg = np.outer(sigma, k)
    return np.cos(arg), np.sin(arg), k


def evaluate(fb: FourierBoundary, sigma) -> tuple[np.ndarray, np.ndarray]:
    """Points and tangent vectors of the curve at the given parameter values."""
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    cos, sin, k = _mode_tables(fb, sigma)
    x = 0.5 * fb.a0 + cos @ fb.a + sin @ fb.ap
    y = 0.5 * fb.b0 + cos @ fb.b + sin @ fb.bp
    dx = -(sin * k) @ fb.a + (cos * k) @ fb.ap
    dy = -(sin * k) @ fb.b + (cos * k) @ fb.bp
    return np.column_stack([x, y]), np.column_stack([dx, dy])


def _grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def signed_area(fb: FourierBoundary) -> float:
    """pi * sum k (a_k bp_k - ap_k b_k); exact for any parametrization."""
    k = np.arange(1, fb.order + 1)
    return math.pi * float(np.sum(k * (fb.a * fb.bp - fb.ap * fb.b)))


def is_simple(fb: FourierBoundary, samples: int | None = None) -> bool:
    """Self-intersection and winding test on a sampled polygonal proxy."""
    n = samples or max(64, 4 * fb.order)
    pts, tan = evaluate(fb, _grid(n))
    seg0 = pts
    seg1 = np.roll(pts, -1, axis=0)
    d = seg1 - seg0
    # All non-adjacent segment pairs i < j.
    i_idx, j_idx = np.triu_indices(n, k=2)
    keep = ~((i_idx == 0) & (j_idx == n - 1))
    i_idx, j_idx = i_idx[keep], j_idx[keep]
    p, r = seg0[i_idx], d[i_idx]
    q, s = seg0[j_idx], d[j_idx]
    rxs = r[:, 0] * s[:, 1] - r[:, 1] * s[:, 0]
    qp = q - p
    t_num = qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]
    u_num = qp[:, 0] * r[:, 1] - qp[:, 1] * r[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = t_num / rxs
        u = u_num / rxs
    hits = (np.abs(rxs) > 1e-14) & (t > 0.0) & (t < 1.0) & (u > 0.0) & (u < 1.0)
    if np.any(hits):
        return False
    # Winding of the tangent: a simple closed curve turns by exactly +-2*pi.
    ang = np.arctan2(tan[:, 1], tan[:, 0])
    turns = np.diff(np.concatenate([ang, ang[:1]]))
    turns = np.mod(turns + np.pi, 2.0 * np.pi) - np.pi
    winding = np.sum(turns) / (2.0 * np.pi)
    return bool(abs(abs(winding) - 1.0) < 0.25)


@dataclass(frozen=True)
class QuadratureInfo:
    panels: int
    achieved_tol: float
    converged: bool


def quadrature_moments(
    fb: FourierBoundary,
    panels: int | None = None,
    tol: float = 1e-12,
    panel_cap: int = 1 << 17,
    check_simple: bool = True,
    full: bool = False,
):
    """MomentSummary of the enclosed region via boundary quadrature.

    Area-type integrals use Green's-theorem boundary forms, boundary-type
    integrals the speed-weighted line element.  The periodic trapezoidal
    rule is spectrally accurate here; panel count is doubled until the
    results change by less than ``tol`` relative or ``panel_cap`` is hit.
    """
    if check_simple and not is_simple(fb):
        raise NonSimpleCurveError("curve is not simple on the sampling grid")

    n = panels or 8 * fb.order
    n = max(n, 8 * fb.order, 32)
    prev = None
    info = None
    while True:
        raw = _raw_boundary_integrals(fb, n)
        if prev is not None:
            scale = float(np.max(np.abs(raw))) or 1.0
            err = float(np.max(np.abs(raw - prev))) / scale
            if err <= tol:
                info = QuadratureInfo(n, err, True)
                break
            if 2 * n > panel_cap:
                info = QuadratureInfo(n, err, False)
                warnings.warn(
                    f"quadrature stopped at {n} panels with relative change {err:.2e}",
                    stacklevel=2,
                )
                break
        prev = raw
        n *= 2

    summary = _summary_from_raw(raw)
    return (summary, info) if full else summary


def _raw_boundary_integrals(fb: FourierBoundary, n: int) -> np.ndarray:
    """Trapezoidal values of all area-form and line-element integrals."""
    pts, tan = evaluate(fb, _grid(n))
    x, y = pts[:, 0], pts[:, 1]
    dx, dy = tan[:, 0], tan[:, 1]
    w = 2.0 * np.pi / n
    speed = np.hypot(dx, dy)
    # Green's forms, written symmetrically in x and y.
    area = 0.5 * np.sum(x * dy - y * dx)
    fx = 0.5 * np.sum(x * x * dy)
    fy = -0.5 * np.sum(y * y * dx)
    jxx = np.sum(x ** 3 * dy) / 3.0
    jyy = -np.sum(y ** 3 * dx) / 3.0
    jxy = 0.5 * np.sum(x * x * y * dy)
    per = np.sum(speed)
    bx = np.sum(x * speed)
    by = np.sum(y * speed)
    ixx = np.sum(x * x * speed)
    iyy = np.sum(y * y * speed)
    ixy = np.sum(x * y * speed)
    return w * np.array([area, fx, fy, jxx, jyy, jxy, per, bx, by, ixx, iyy, ixy])


def _summary_from_raw(raw: np.ndarray) -> MomentSummary:
    area, fx, fy, jxx, jyy, jxy, per, bx, by, ixx, iyy, ixy = map(float, raw)
    if area == 0.0:
        raise DegenerateShapeError("curve encloses zero signed area")
    sign = 1.0 if area > 0.0 else -1.0
    M = sign * np.array([[jxx, jxy], [jxy, jyy]])
    MB = np.array([[ixx, ixy], [ixy, iyy]])
    return _build_summary(2, sign * area, sign * np.array([fx, fy]), M,
                          per, np.array([bx, by]), MB)


def constant_speed_residual(fb: FourierBoundary, samples: int | None = None) -> float:
    """max |speed^2 - mean| / mean over a dense grid; zero iff arc-length-like."""
    n = samples or max(64, 16 * fb.order)
    _, tan = evaluate(fb, _grid(n))
    s2 = np.einsum("ij,ij->i", tan, tan)
    mean = float(np.mean(s2))
    if mean <= 0.0:
        raise DegenerateShapeError("curve has identically zero speed")
    return float(np.max(np.abs(s2 - mean)) / mean)


@dataclass(frozen=True, eq=False)
class ParsevalSummary:
    """Perimeter, area and boundary moments as coefficient quadratic forms."""

    L: float
    area: float
    I1: float
    I2: float
    a_sq: float      # sum over modes of a_k^2 + ap_k^2
    b_sq: float


def parseval_quantities(fb: FourierBoundary, residual_limit: float = 1e-8) -> ParsevalSummary:
    """Evaluate the arc-length-parametrization identities.

    Requires speed to be constant within ``residual_limit``; with
    sigma = 2*pi*s/L the identities are

        L^2 = 2 pi^2 sum k^2 (a_k^2 + ap_k^2 + b_k^2 + bp_k^2)
        |Omega| = pi sum k (a_k bp_k - ap_k b_k)
        I1 = (L/2) (a0^2/2 + a^2),   I2 = (L/2) (b0^2/2 + b^2)
    """
    res = constant_speed_residual(fb)
    if res >= residual_limit:
        raise ConstantSpeedError(res, residual_limit)
    k = np.arange(1, fb.order + 1)
    a_sq = float(np.sum(fb.a ** 2 + fb.ap ** 2))
    b_sq = float(np.sum(fb.b ** 2 + fb.bp ** 2))
    L = math.sqrt(2.0 * math.pi ** 2
                  * float(np.sum(k ** 2 * (fb.a ** 2 + fb.ap ** 2 + fb.b ** 2 + fb.bp ** 2))))
    area = signed_area(fb)
    if area <= 0.0:
        raise OrientationError("boundary must be traversed counterclockwise")
    i1 = 0.5 * L * (0.5 * fb.a0 ** 2 + a_sq)
    i2 = 0.5 * L * (0.5 * fb.b0 ** 2 + b_sq)
    return ParsevalSummary(L, area, i1, i2, a_sq, b_sq)


def reparametrize_constant_speed(
    fb: FourierBoundary,
    order_out: int | None = None,
    residual_target: float = 1e-8,
    full: bool = False,
):
    """Resample the curve at equal arc length and project onto ``order_out`` modes.

    The arc-length function is integrated spectrally from the speed series and
    inverted by Newton iteration; the same point set is returned up to the
    truncation error of the output order.
    """
    k_out = order_out or max(4 * fb.order, 16)
    m = 1 << max(10, int(math.ceil(math.log2(16 * max(fb.order, k_out)))))
    sigma = _grid(m)
    _, tan = evaluate(fb, sigma)
    speed = np.hypot(tan[:, 0], tan[:, 1])
    if np.min(speed) <= 1e-8 * np.max(speed):
        raise DegenerateShapeError("curve speed vanishes: cusp detected")

    coef = np.fft.rfft(speed) / m
    mean = coef[0].real
    L = 2.0 * np.pi * mean
    modes = np.arange(1, len(coef))
    cr, ci = 2.0 * coef[1:].real, 2.0 * coef[1:].imag
    # The speed series of a smooth curve decays fast; drop negligible modes.
    keep = np.abs(cr) + np.abs(ci) > 1e-16 * abs(mean)
    if np.any(keep):
        last = int(np.max(np.flatnonzero(keep))) + 1
        modes, cr, ci = modes[:last], cr[:last], ci[:last]
    else:
        modes, cr, ci = modes[:1], cr[:1], ci[:1]

    def arclen(s):
        arg = np.outer(s, modes)
        # integral of cr*cos + (-ci)*sin from 0 to s, mode by mode
        return mean * s + (np.sin(arg) @ (cr / modes)) + ((np.cos(arg) - 1.0) @ (ci / modes))

    def speed_at(s):
        arg = np.outer(s, modes)
        return mean + np.cos(arg) @ cr - np.sin(arg) @ ci

    targets = L * np.arange(m) / m
    s = _grid(m).copy()
    for _ in range(50):
        f = arclen(s) - targets
        step = f / speed_at(s)
        s -= step
        if np.max(np.abs(step)) < 1e-15:
            break

    pts, _ = evaluate(fb, s)
    out = FourierBoundary.from_samples(pts[:, 0], pts[:, 1], k_out)
    res = constant_speed_residual(out)
    if res >= residual_target:
        warnings.warn(
            f"reparametrization reached residual {res:.2e} at order {k_out}; "
            f"increase the output order for a tighter fit",
            stacklevel=2,
        )
    return (out, res) if full else out


# ---------------------------------------------------------------------------
# Two-mode speed expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TwoModeSpeedCoefficients:
    """Trigonometric expansion of speed^2 for a curve carrying two modes.

    With modes k1, k2 the squared speed is

        c0 + c1 cos(2 k1 s) + c2 sin(2 k1 s) + c3 cos(2 k2 s) + c4 sin(2 k2 s)
           + c5 cos((k1-k2) s) + c6 cos((k1+k2) s)
           + c7 sin((k1-k2) s) + c8 sin((k1+k2) s)
    """

    k1: int
    k2: int
    c: np.ndarray


def two_mode_speed_coefficients(k1, k2, mode1, mode2) -> TwoModeSpeedCoefficients:
    """Closed-form c0..c8 from the two modes' coefficients (a, ap, b, bp)."""
    k1, k2 = int(k1), int(k2)
    if k1 < 1 or k2 < 1:
        raise ValueError("mode indices must be positive")
    a1, ap1, b1, bp1 = (float(v) for v in mode1)
    a2, ap2, b2, bp2 = (float(v) for v in mode2)
    if k1 == k2 and any(abs(v) > 0.0 for v in (a2, ap2, b2, bp2)):
        raise ValueError("equal mode indices are allowed only with a vanishing second mode")
    c = np.zeros(9)
    c[0] = 0.5 * k1 ** 2 * (a1 ** 2 + ap1 ** 2 + b1 ** 2 + bp1 ** 2) \
        + 0.5 * k2 ** 2 * (a2 ** 2 + ap2 ** 2 + b2 ** 2 + bp2 ** 2)
    c[1] = 0.5 * k1 ** 2 * (ap1 ** 2 + bp1 ** 2 - a1 ** 2 - b1 ** 2)
    c[2] = -k1 ** 2 * (a1 * ap1 + b1 * bp1)
    c[3] = 0.5 * k2 ** 2 * (bp2 ** 2 + ap2 ** 2 - b2 ** 2 - a2 ** 2)
    c[4] = -k2 ** 2 * (a2 * ap2 + b2 * bp2)
    c[5] = k1 * k2 * (a1 * a2 + b1 * b2 + ap1 * ap2 + bp1 * bp2)
    c[6] = k1 * k2 * (-a1 * a2 - b1 * b2 + ap1 * ap2 + bp1 * bp2)
    c[7] = k1 * k2 * (ap1 * a2 + bp1 * b2 - a1 * ap2 - b1 * bp2)
    c[8] = -k1 * k2 * (a1 * ap2 + b1 * bp2 + ap1 * a2 + bp1 * b2)
    return TwoModeSpeedCoefficients(k1, k2, c)


def reconstruct_speed_squared(tm: TwoModeSpeedCoefficients, sigma) -> np.ndarray:
    sigma = np.atleast_1d(np.asarray(sigma, dtype=float))
    c, k1, k2 = tm.c, tm.k1, tm.k2
    return (c[0]
            + c[1] * np.cos(2 * k1 * sigma) + c[2] * np.sin(2 * k1 * sigma)
            + c[3] * np.cos(2 * k2 * sigma) + c[4] * np.sin(2 * k2 * sigma)
            + c[5] * np.cos((k1 - k2) * sigma) + c[6] * np.cos((k1 + k2) * sigma)
            + c[7] * np.sin((k1 - k2) * sigma) + c[8] * np.sin((k1 + k2) * sigma))


# ---------------------------------------------------------------------------
# Stationarity system of the constrained boundary-moment minimization
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LagrangeReport:
    """First-order conditions of minimizing I1*I2 at fixed area.

    ``residuals[k-1]`` holds the four stationarity equations of mode k in
    the order (a, ap, b, bp).  ``mode_discriminant[k-1]`` is the quantity
    whose vanishing allows mode k to carry a nonzero amplitude, and
    ``f_values[t-1]`` samples the function whose convexity limits the number
    of simultaneously active modes to two.
    """

    lam: float
    L: float
    a_sq: float
    b_sq: float
    residuals: np.ndarray
    mode_discriminant: np.ndarray
    f_values: np.ndarray

    @property
    def residual_norm(self) -> float:
        return float(np.linalg.norm(self.residuals))


def speed_mode_function(t, L: float, a_sq: float, b_sq: float):
    """f(t) = (2 pi^2 t a^2 + L^2)(2 pi^2 t b^2 + L^2) / t for t >= 1."""
    t = np.asarray(t, dtype=float)
    return (2.0 * math.pi ** 2 * t * a_sq + L ** 2) \
        * (2.0 * math.pi ** 2 * t * b_sq + L ** 2) / t


def lagrange_system(
    fb: FourierBoundary,
    lam: float,
    residual_limit: float = 1e-6,
    f_samples: int | None = None,
) -> LagrangeReport:
    """Evaluate the stationarity equations at the given multiplier.

    The coefficients enter through L, a^2, b^2 of the arc-length identities,
    so an (approximately) constant-speed parametrization is required.
    """
    res = constant_speed_residual(fb)
    if res >= residual_limit:
        raise ConstantSpeedError(res, residual_limit)
    ps = parseval_quantities(fb, residual_limit=residual_limit)
    L, a_sq, b_sq = ps.L, ps.a_sq, ps.b_sq
    k = np.arange(1, fb.order + 1, dtype=float)
    common = 4.0 * math.pi ** 2 * k ** 2 * a_sq * b_sq
    r_a = (common + 2.0 * L ** 2 * b_sq) * fb.a - lam * k * fb.bp
    r_ap = (common + 2.0 * L ** 2 * b_sq) * fb.ap + lam * k * fb.b
    r_b = (common + 2.0 * L ** 2 * a_sq) * fb.b + lam * k * fb.ap
    r_bp = (common + 2.0 * L ** 2 * a_sq) * fb.bp - lam * k * fb.a
    residuals = np.column_stack([r_a, r_ap, r_b, r_bp])
    disc = 4.0 * a_sq * b_sq \
        * (2.0 * math.pi ** 2 * k ** 2 * a_sq + L ** 2) \
        * (2.0 * math.pi ** 2 * k ** 2 * b_sq + L ** 2) \
        - k ** 2 * lam ** 2
    ts = np.arange(1, (f_samples or max(7, fb.order)) + 1, dtype=float)
    return LagrangeReport(
        lam=float(lam),
        L=L,
        a_sq=a_sq,
        b_sq=b_sq,
        residuals=residuals,
        mode_discriminant=disc,
        f_values=speed_mode_function(ts, L, a_sq, b_sq),
    )
