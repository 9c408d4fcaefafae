"""Constrained minimization of the boundary-moment product over Fourier shapes.

Minimizes I1 * I2 (products of the boundary moments about the two axes) over
the Fourier coefficients of a closed curve at fixed enclosed area.  The
Euclidean-motion and reparametrization null spaces are removed by gauge
fixing (a0 = b0 = 0, ap_1 = b_1 = 0, plus small constant-speed and centroid
penalties); the area constraint is handled by an augmented Lagrangian with
multiplier updates.  The minimizer over this class is the disc, for which
the objective equals pi^2 at area pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import ConstantSpeedError, NonSimpleCurveError
from .fourier import (
    FourierBoundary,
    LagrangeReport,
    constant_speed_residual,
    is_simple,
    lagrange_system,
    signed_area,
)

__all__ = [
    "OptimizationProblem",
    "OptimizationTrace",
    "TraceEntry",
    "StationarityReport",
    "minimize_product",
    "objective_gradient",
    "projected_gradient",
    "boundary_moment_product",
    "apply_gauge",
    "stationarity_report",
]


@dataclass(frozen=True)
class OptimizationProblem:
    """Settings of the fixed-area boundary-moment-product minimization."""

    order: int = 8
    target_area: float = math.pi
    speed_weight: float = 2.0
    centroid_weight: float = 1.0
    initial_penalty: float = 10.0
    penalty_growth: float = 10.0
    max_penalty: float = 1e8
    outer_iterations: int = 30
    inner_iterations: int = 2000
    area_tol: float = 1e-9          # relative to target_area
    kkt_tol: float = 1e-6
    panels: int | None = None

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("order must be >= 2 so nontrivial deformations exist")
        if self.target_area <= 0.0:
            raise ValueError("target area must be positive")


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    objective: float
    area_residual: float     # signed, relative to the target area
    speed_residual: float
    grad_norm: float
    multiplier: float


@dataclass(frozen=True, eq=False)
class OptimizationTrace:
    entries: tuple
    final: FourierBoundary
    verdict: str
    converged: bool
    evaluations: int
    max_uphill: float = 0.0    # largest increase of the augmented objective
                               # between accepted inner iterates (roundoff scale)


# ---------------------------------------------------------------------------
# Coefficient packing and gauge
# ---------------------------------------------------------------------------


def _free_mask(order: int) -> np.ndarray:
    """Gauge pins a0, b0, ap_1 and b_1 in the packed coefficient array."""
    mask = np.ones(2 + 4 * order, dtype=bool)
    mask[0] = mask[1] = False
    mask[2 + order] = False          # ap_1
    mask[2 + 2 * order] = False      # b_1
    return mask


def apply_gauge(fb: FourierBoundary, target_area: float | None = None) -> FourierBoundary:
    """Rotate space and shift the parameter so that ap_1 = b_1 = 0, drop the
    constant terms, and optionally rescale to the target area.

    The first-mode coefficient matrix [[a1, ap1], [b1, bp1]] is diagonalized
    by a two-sided rotation (its SVD); the left factor acts on the plane, the
    right factor is a parameter shift acting on mode k as a rotation by
    k times the shift angle.
    """
    c1 = np.array([[fb.a[0], fb.ap[0]], [fb.b[0], fb.bp[0]]])
    u, s, vt = np.linalg.svd(c1)
    if np.linalg.det(u) < 0.0:
        u[:, 1] *= -1.0
    if np.linalg.det(vt) < 0.0:
        vt[1, :] *= -1.0
    delta = math.atan2(vt.T[1, 0], vt.T[0, 0])
    rotated = fb.rotated(u.T)
    k = np.arange(1, fb.order + 1)
    cos_d, sin_d = np.cos(k * delta), np.sin(k * delta)
    a = rotated.a * cos_d + rotated.ap * sin_d
    ap = -rotated.a * sin_d + rotated.ap * cos_d
    b = rotated.b * cos_d + rotated.bp * sin_d
    bp = -rotated.b * sin_d + rotated.bp * cos_d
    ap[0] = 0.0
    b[0] = 0.0
    out = FourierBoundary(0.0, 0.0, a, ap, b, bp)
    if target_area is not None:
        area = signed_area(out)
        if area < 0.0:
            out = out.reversed()
            area = -area
        if area <= 1e-12 * target_area:
            raise NonSimpleCurveError("curve encloses no area; cannot rescale")
        out = out.scaled(np.full(2, math.sqrt(target_area / area)))
    return out


# ---------------------------------------------------------------------------
# Objective, penalties, and their analytic gradients
# ---------------------------------------------------------------------------


class _Evaluator:
    """Fixed-grid quadrature of the objective and penalties, with gradients.

    The grid is frozen per instance so that analytic gradients are the exact
    derivatives of the discrete functionals (finite differences reproduce
    them to roundoff).
    """

    def __init__(self, order: int, panels: int | None = None):
        self.order = order
        n = panels or max(192, 24 * order)
        self.n = n
        sigma = 2.0 * np.pi * np.arange(n) / n
        k = np.arange(1, order + 1, dtype=float)
        self.k = k
        self.C = np.cos(np.outer(sigma, k))
        self.S = np.sin(np.outer(sigma, k))
        self.w = 2.0 * np.pi / n
        self.calls = 0

    def split(self, c: np.ndarray):
        K = self.order
        return c[0], c[1], c[2:2 + K], c[2 + K:2 + 2 * K], \
            c[2 + 2 * K:2 + 3 * K], c[2 + 3 * K:2 + 4 * K]

    def curve(self, c: np.ndarray):
        a0, b0, a, ap, b, bp = self.split(c)
        x = 0.5 * a0 + self.C @ a + self.S @ ap
        y = 0.5 * b0 + self.C @ b + self.S @ bp
        dx = -self.S @ (self.k * a) + self.C @ (self.k * ap)
        dy = -self.S @ (self.k * b) + self.C @ (self.k * bp)
        return x, y, dx, dy

    def _grad_from_nodes(self, gx, gdx, gy, gdy) -> np.ndarray:
        """Assemble d/dcoefficients from nodewise d/dx, d/dx', d/dy, d/dy'."""
        out = np.empty(2 + 4 * self.order)
        out[0] = 0.5 * np.sum(gx)
        out[1] = 0.5 * np.sum(gy)
        K = self.order
        out[2:2 + K] = self.C.T @ gx - self.k * (self.S.T @ gdx)
        out[2 + K:2 + 2 * K] = self.S.T @ gx + self.k * (self.C.T @ gdx)
        out[2 + 2 * K:2 + 3 * K] = self.C.T @ gy - self.k * (self.S.T @ gdy)
        out[2 + 3 * K:2 + 4 * K] = self.S.T @ gy + self.k * (self.C.T @ gdy)
        return out

    def objective(self, c: np.ndarray, grad: bool = False):
        """I1 * I2 by quadrature; optionally with its coefficient gradient."""
        self.calls += 1
        x, y, dx, dy = self.curve(c)
        s = np.hypot(dx, dy)
        w = self.w
        i1 = w * float(x * x @ s)
        i2 = w * float(y * y @ s)
        value = i1 * i2
        if not grad:
            return value
        inv = 1.0 / s
        g1 = self._grad_from_nodes(2.0 * w * x * s, w * x * x * dx * inv,
                                   np.zeros_like(y), w * x * x * dy * inv)
        g2 = self._grad_from_nodes(np.zeros_like(x), w * y * y * dx * inv,
                                   2.0 * w * y * s, w * y * y * dy * inv)
        return value, i2 * g1 + i1 * g2

    def area(self, c: np.ndarray, grad: bool = False):
        """Enclosed area; exact quadratic in the coefficients."""
        _, _, a, ap, b, bp = self.split(c)
        k = self.k
        value = math.pi * float(np.sum(k * (a * bp - ap * b)))
        if not grad:
            return value
        g = np.zeros(2 + 4 * self.order)
        K = self.order
        g[2:2 + K] = math.pi * k * bp
        g[2 + K:2 + 2 * K] = -math.pi * k * b
        g[2 + 2 * K:2 + 3 * K] = -math.pi * k * ap
        g[2 + 3 * K:2 + 4 * K] = math.pi * k * a
        return value, g

    def speed_penalty(self, c: np.ndarray, grad: bool = False):
        """Relative variance of speed^2 over the grid; zero at arc length."""
        x, y, dx, dy = self.curve(c)
        s2 = dx * dx + dy * dy
        m = float(np.mean(s2))
        q = float(np.mean((s2 - m) ** 2))
        value = q / (m * m)
        if not grad:
            return value
        n = self.n
        t = (2.0 / n) * ((s2 - m) / (m * m) - q / (m ** 3))
        g = self._grad_from_nodes(np.zeros(n), 2.0 * t * dx,
                                  np.zeros(n), 2.0 * t * dy)
        return value, g

    def centroid_penalty(self, c: np.ndarray, grad: bool = False):
        """Squared norm of the (unnormalized) boundary first moments."""
        x, y, dx, dy = self.curve(c)
        s = np.hypot(dx, dy)
        w = self.w
        mx = w * float(x @ s)
        my = w * float(y @ s)
        value = mx * mx + my * my
        if not grad:
            return value
        inv = 1.0 / s
        gx_part = self._grad_from_nodes(w * s, w * x * dx * inv,
                                        np.zeros_like(y), w * x * dy * inv)
        gy_part = self._grad_from_nodes(np.zeros_like(x), w * y * dx * inv,
                                        w * s, w * y * dy * inv)
        return value, 2.0 * mx * gx_part + 2.0 * my * gy_part

    def speed_floor(self, c: np.ndarray) -> float:
        _, _, dx, dy = self.curve(c)
        s = np.hypot(dx, dy)
        return float(np.min(s) / np.max(s))


def boundary_moment_product(fb: FourierBoundary, panels: int | None = None) -> float:
    """I1 * I2 of the curve on the optimizer's fixed quadrature grid."""
    ev = _Evaluator(fb.order, panels)
    return ev.objective(fb.coefficient_array())


def objective_gradient(fb: FourierBoundary, panels: int | None = None) -> np.ndarray:
    """Gradient of I1 * I2 with respect to all packed Fourier coefficients."""
    ev = _Evaluator(fb.order, panels)
    _, g = ev.objective(fb.coefficient_array(), grad=True)
    return g


def projected_gradient(fb: FourierBoundary, panels: int | None = None,
                       weights=(0.0, 0.0)):
    """Norm of the objective gradient projected on the constraint tangent
    space and the gauge, plus the least-squares area multiplier in the
    normalization of the stationarity system (4*pi times the raw one)."""
    ev = _Evaluator(fb.order, panels)
    norm, mu = _kkt_residual(ev, fb.coefficient_array(), weights, _free_mask(fb.order))
    return norm, 4.0 * math.pi * mu


def _kkt_residual(ev: _Evaluator, c: np.ndarray, weights, free: np.ndarray):
    """Projected stationarity residual and least-squares area multiplier."""
    w_s, w_c = weights
    _, g_obj = ev.objective(c, grad=True)
    if w_s:
        _, g_sp = ev.speed_penalty(c, grad=True)
        g_obj = g_obj + w_s * g_sp
    if w_c:
        _, g_ce = ev.centroid_penalty(c, grad=True)
        g_obj = g_obj + w_c * g_ce
    _, g_area = ev.area(c, grad=True)
    gf, ga = g_obj[free], g_area[free]
    denom = float(ga @ ga)
    mu = float(gf @ ga) / denom if denom > 0.0 else 0.0
    return float(np.linalg.norm(gf - mu * ga)), mu


def minimize_product(initial: FourierBoundary, problem: OptimizationProblem | None = None,
                     ) -> OptimizationTrace:
    """Augmented-Lagrangian minimization of I1 * I2 at fixed area.

    The initial shape is gauge-fixed and area-renormalized first.  Each outer
    iteration solves the penalized subproblem with L-BFGS (analytic
    gradients), then updates the multiplier; the trace records the raw
    objective, constraint residuals and the projected stationarity norm.
    """
    problem = problem or OptimizationProblem()
    K = problem.order
    padded = _padded(initial, K)
    if not is_simple(padded):
        raise NonSimpleCurveError("initial shape is not a simple curve")
    fb0 = apply_gauge(padded, problem.target_area)
    ev = _Evaluator(K, problem.panels)
    free = _free_mask(K)
    target = problem.target_area
    w_s, w_c = problem.speed_weight, problem.centroid_weight

    full = fb0.coefficient_array()
    x = full[free]

    def expand(xf):
        out = np.zeros(2 + 4 * K)
        out[free] = xf
        return out

    # Warm-started multiplier: a stationary feasible start stays put.
    _, mu0 = _kkt_residual(ev, full, (w_s, w_c), free)
    state = {"mu": mu0, "rho": problem.initial_penalty}

    def augmented(xf):
        c = expand(xf)
        if ev.speed_floor(c) < 1e-9:
            return 1e10, np.zeros(xf.size)
        e, ge = ev.objective(c, grad=True)
        ps, gps = ev.speed_penalty(c, grad=True)
        pc, gpc = ev.centroid_penalty(c, grad=True)
        g, gg = ev.area(c, grad=True)
        viol = g - target
        val = e + w_s * ps + w_c * pc - state["mu"] * viol + 0.5 * state["rho"] * viol ** 2
        grad = ge + w_s * gps + w_c * gpc + (state["rho"] * viol - state["mu"]) * gg
        return val, grad[free]

    entries = []
    prev_viol = np.inf
    converged = False
    verdict = "max_outer_iterations"
    max_uphill = 0.0
    for outer in range(problem.outer_iterations):
        last_val = [augmented(x)[0]]

        def watch_descent(xk):
            val = augmented(xk)[0]
            nonlocal max_uphill
            max_uphill = max(max_uphill, val - last_val[0])
            last_val[0] = val

        res = scipy.optimize.minimize(
            augmented, x, jac=True, method="L-BFGS-B", callback=watch_descent,
            options={"maxiter": problem.inner_iterations, "ftol": 1e-16,
                     "gtol": 1e-11, "maxcor": 25},
        )
        x = res.x
        c = expand(x)
        viol = ev.area(c) - target
        kkt, mu_ls = _kkt_residual(ev, c, (w_s, w_c), free)
        entries.append(TraceEntry(
            iteration=outer,
            objective=ev.objective(c),
            area_residual=viol / target,
            speed_residual=_speed_residual(ev, c),
            grad_norm=kkt,
            multiplier=4.0 * math.pi * mu_ls,
        ))
        if abs(viol) <= problem.area_tol * target and kkt <= problem.kkt_tol:
            converged = True
            verdict = "converged"
            break
        state["mu"] -= state["rho"] * viol
        # Grow the penalty only while it is actually needed; once the
        # violation sits near the tolerance, growth just ruins conditioning.
        if abs(viol) > 0.25 * prev_viol and abs(viol) > 10.0 * problem.area_tol * target:
            state["rho"] = min(state["rho"] * problem.penalty_growth, problem.max_penalty)
        prev_viol = abs(viol)

    final = FourierBoundary.from_coefficient_array(expand(x), K)
    if not is_simple(final):
        verdict = "failed: non-simple final shape"
        converged = False
    return OptimizationTrace(tuple(entries), final, verdict, converged, ev.calls,
                             max_uphill)


def _speed_residual(ev: _Evaluator, c: np.ndarray) -> float:
    _, _, dx, dy = ev.curve(c)
    s2 = dx * dx + dy * dy
    m = float(np.mean(s2))
    return float(np.max(np.abs(s2 - m)) / m)


def _padded(fb: FourierBoundary, order: int) -> FourierBoundary:
    if fb.order == order:
        return fb
    def pad(v):
        out = np.zeros(order)
        out[:min(len(v), order)] = v[:order]
        return out
    return FourierBoundary(fb.a0, fb.b0, pad(fb.a), pad(fb.ap), pad(fb.b), pad(fb.bp))


# ---------------------------------------------------------------------------
# Stationarity diagnostics in the arc-length identities
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class StationarityReport:
    """Multiplier estimate and per-mode diagnostics at a candidate minimizer.

    ``active_modes`` lists mode indices carrying non-negligible amplitude;
    at a true constant-speed stationary point each active mode annihilates
    its discriminant, and convexity of the sampled mode function limits the
    active set to at most two indices.
    """

    lam: float
    amplitudes: np.ndarray
    active_modes: tuple
    discriminant_rel: np.ndarray
    f_second_differences: np.ndarray
    system: LagrangeReport

    @property
    def residual_norm(self) -> float:
        return self.system.residual_norm

    def active_discriminants_vanish(self, tol: float = 1e-6) -> bool:
        return all(abs(self.discriminant_rel[k - 1]) <= tol for k in self.active_modes)


def stationarity_report(fb: FourierBoundary, residual_limit: float = 1e-6,
                        amplitude_tol: float = 1e-4) -> StationarityReport:
    """Estimate the area multiplier by least squares and report mode activity.

    Requires an (approximately) arc-length parametrization, since the
    stationarity system is written in the Parseval variables.
    """
    res = constant_speed_residual(fb)
    if res >= residual_limit:
        raise ConstantSpeedError(res, residual_limit)
    probe = lagrange_system(fb, 0.0, residual_limit=residual_limit)
    L, a_sq, b_sq = probe.L, probe.a_sq, probe.b_sq
    k = np.arange(1, fb.order + 1, dtype=float)
    # Stationarity equations have the form G - lam * H per coefficient.
    common = 4.0 * math.pi ** 2 * k ** 2 * a_sq * b_sq
    G = np.concatenate([
        (common + 2.0 * L ** 2 * b_sq) * fb.a,
        (common + 2.0 * L ** 2 * b_sq) * fb.ap,
        (common + 2.0 * L ** 2 * a_sq) * fb.b,
        (common + 2.0 * L ** 2 * a_sq) * fb.bp,
    ])
    H = np.concatenate([k * fb.bp, -k * fb.b, -k * fb.ap, k * fb.a])
    denom = float(H @ H)
    lam = float(G @ H) / denom if denom > 0.0 else 0.0
    system = lagrange_system(fb, lam, residual_limit=residual_limit)
    amplitudes = np.sqrt(fb.a ** 2 + fb.ap ** 2 + fb.b ** 2 + fb.bp ** 2)
    max_amp = float(np.max(amplitudes)) or 1.0
    active = tuple(int(i + 1) for i in np.flatnonzero(amplitudes > amplitude_tol * max_amp))
    scale = 4.0 * a_sq * b_sq \
        * (2.0 * math.pi ** 2 * k ** 2 * a_sq + L ** 2) \
        * (2.0 * math.pi ** 2 * k ** 2 * b_sq + L ** 2) + k ** 2 * lam ** 2
    return StationarityReport(
        lam=lam,
        amplitudes=amplitudes,
        active_modes=active,
        discriminant_rel=system.mode_discriminant / scale,
        f_second_differences=np.diff(system.f_values, 2),
        system=system,
    )
