"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Base class for invalid or unusable shape inputs."""


class DegenerateShapeError(ShapeError):
    """Shape has zero measure or collapses below numerical tolerance."""


class OrientationError(ShapeError):
    """Boundary orientation is inconsistent or reversed."""


class NonSimpleCurveError(ShapeError):
    """Closed curve intersects itself on the sampling grid."""


class ConstantSpeedError(ShapeError):
    """Operation requires an (approximately) arc-length parametrization.

    Carries the measured relative speed residual in ``residual``.
    """

    def __init__(self, residual, limit):
        self.residual = float(residual)
        self.limit = float(limit)
        super().__init__(
            f"constant-speed parametrization required: relative speed residual "
            f"{self.residual:.3e} exceeds {self.limit:.1e}"
        )


class UnsupportedShapeError(ShapeError):
    """Requested quantity has no supported computation path for this shape."""


class HypothesisViolationError(ShapeError):
    """Shape violates a hypothesis of the requested inequality (not a verdict)."""


class ConditioningError(RuntimeError):
    """A matrix assembled from the trial space is numerically unusable."""

    def __init__(self, message, condition_estimate=None):
        self.condition_estimate = condition_estimate
        if condition_estimate is not None:
            message = f"{message} (condition estimate {condition_estimate:.3e})"
        super().__init__(message)


class ShapeFileError(ValueError):
    """Shape or report document failed to parse or validate."""
