"""Isoperimetric inequality evaluation as (lhs, rhs, margin, verdict) records.

Every inequality compares a moment functional of the shape against its value
for the ball (or ellipsoid) of equal volume, with the ball side computed
analytically so that margins are meaningful down to roundoff.  Shapes are
canonically centered before evaluation; margins are oriented so that a
nonnegative margin means the inequality holds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolationError, UnsupportedShapeError
from .geometry import (
    MomentSummary,
    ball_boundary_moment,
    ball_volume_moment,
    unit_ball_volume,
)
from .ops import canonical_placement, is_convex, moments

__all__ = [
    "INEQUALITY_IDS",
    "InequalityReport",
    "evaluate_inequality",
    "batch_verify",
    "BatchSummary",
    "equality_gap_scan",
]

#: Inequality identifiers, each mapping to one proven moment inequality.
INEQUALITY_IDS = (
    "polar_volume",     # J_0(shape) >= J_0(ball), volume centering
    "polar_boundary",   # I_0(shape) >= I_0(ball), boundary centering
    "j_product",        # prod J_k >= value for the ball/ellipsoid
    "i_product",        # prod I_k >= ball value (convexity needed for N >= 3)
    "det",              # det of the second-moment matrix >= ball value
    "classical_iso",    # |boundary|^N >= N^N omega_N |volume|^(N-1)
    "per_axis",         # I_k^(N+2) >= (N+2)^(N+1) omega_N J_k^(N+1), worst axis
)

_VERDICT_REL_TOL = 1e-12
_EQUALITY_REL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class InequalityReport:
    inequality: str
    lhs: float
    rhs: float
    centering: str
    axis: int | None = None

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def scale(self) -> float:
        return max(abs(self.lhs), abs(self.rhs))

    @property
    def relative_margin(self) -> float:
        return self.margin / self.scale if self.scale > 0.0 else 0.0

    @property
    def holds(self) -> bool:
        return self.margin >= -_VERDICT_REL_TOL * self.scale

    @property
    def is_equality(self) -> bool:
        return abs(self.relative_margin) < _EQUALITY_REL_TOL

    def as_dict(self) -> dict:
        d = {
            "inequality": self.inequality,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "relative_margin": self.relative_margin,
            "holds": self.holds,
            "equality": self.is_equality,
            "centering": self.centering,
        }
        if self.axis is not None:
            d["axis"] = self.axis
        return d


def _equal_volume_radius(n: int, volume: float) -> float:
    return (volume / unit_ball_volume(n)) ** (1.0 / n)


def _centering_for(inequality: str) -> str:
    if inequality in ("polar_volume", "j_product", "det"):
        return "volume"
    if inequality in ("polar_boundary", "i_product", "per_axis"):
        return "boundary"
    return "none"


def _check_hypotheses(inequality: str, shape, n: int) -> None:
    if inequality in ("i_product", "per_axis") and n >= 3 and not is_convex(shape):
        raise HypothesisViolationError(
            f"{inequality} requires a convex shape in dimension {n}"
        )


def _needs_boundary(inequality: str) -> bool:
    return inequality in ("polar_boundary", "i_product", "classical_iso", "per_axis")


def evaluate_inequality(inequality: str, shape) -> InequalityReport:
    """Evaluate one inequality id on a shape, centering it first as required."""
    if inequality not in INEQUALITY_IDS:
        raise ValueError(f"unknown inequality id {inequality!r}; choose from {INEQUALITY_IDS}")
    try:
        n = shape.dimension
    except AttributeError:
        raise UnsupportedShapeError(f"unsupported shape type {type(shape).__name__}")
    _check_hypotheses(inequality, shape, n)

    centering = _centering_for(inequality)
    if centering != "none":
        shape, _ = canonical_placement(shape, mode=centering)
    m = moments(shape, boundary=_needs_boundary(inequality))
    return _report_from_moments(inequality, m, centering)


def _report_from_moments(inequality: str, m: MomentSummary, centering: str) -> InequalityReport:
    n = m.dimension
    r = _equal_volume_radius(n, m.volume)
    axis = None
    if inequality == "polar_volume":
        lhs, rhs = m.J0, n * ball_volume_moment(n, r)
    elif inequality == "polar_boundary":
        lhs, rhs = m.I0, n * ball_boundary_moment(n, r)
    elif inequality == "j_product":
        lhs, rhs = m.J_prod, ball_volume_moment(n, r) ** n
    elif inequality == "i_product":
        lhs, rhs = m.I_prod, ball_boundary_moment(n, r) ** n
    elif inequality == "det":
        lhs, rhs = m.D, ball_volume_moment(n, r) ** n
    elif inequality == "classical_iso":
        lhs = m.surface ** n
        rhs = n ** n * unit_ball_volume(n) * m.volume ** (n - 1)
    else:  # per_axis: report the axis with the smallest relative margin
        lhs_all = m.I ** (n + 2)
        rhs_all = (n + 2) ** (n + 1) * unit_ball_volume(n) * m.J ** (n + 1)
        rel = (lhs_all - rhs_all) / np.maximum(np.abs(lhs_all), np.abs(rhs_all))
        axis = int(np.argmin(rel))
        lhs, rhs = float(lhs_all[axis]), float(rhs_all[axis])
    if lhs is None:
        raise UnsupportedShapeError(f"{inequality} needs boundary moments")
    return InequalityReport(inequality, float(lhs), float(rhs), centering, axis)


@dataclass(frozen=True)
class BatchSummary:
    total: int
    holds: int
    equalities: int
    violations: int
    errors: int


def batch_verify(shapes, inequalities=None):
    """Evaluate several inequality ids over several shapes.

    Returns ``(records, summary)`` where each record is
    ``(shape_index, inequality, InequalityReport | Exception)``; per-item
    errors are captured without aborting the batch.
    """
    ids = tuple(inequalities) if inequalities else INEQUALITY_IDS
    records = []
    holds = equalities = violations = errors = 0
    for idx, shape in enumerate(shapes):
        for ineq in ids:
            try:
                rep = evaluate_inequality(ineq, shape)
            except Exception as exc:  # noqa: BLE001 - reported, not swallowed
                records.append((idx, ineq, exc))
                errors += 1
                continue
            records.append((idx, ineq, rep))
            if rep.holds:
                holds += 1
                if rep.is_equality:
                    equalities += 1
            else:
                violations += 1
    return records, BatchSummary(len(records), holds, equalities, violations, errors)


def equality_gap_scan(family, inequality: str):
    """Relative margin of one inequality along a parametrized shape family.

    ``family`` is an iterable of ``(parameter, shape)`` pairs, parameter 0
    being the expected equality case.  Returns a list of
    ``(parameter, relative_margin)`` tuples in input order.
    """
    curve = []
    for param, shape in family:
        rep = evaluate_inequality(inequality, shape)
        curve.append((float(param), rep.relative_margin))
    return curve
