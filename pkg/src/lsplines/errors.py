"""Exception types shared across the library.

Validation errors (bad knots, bad parameters, singular trigonometric
intervals) are distinct from numerical failures (quadrature that refuses to
converge) so the CLI can map them to different exit codes.
"""


class LSplineError(Exception):
    """Base class for all library errors."""


class NonMonotoneKnots(LSplineError):
    """Knot vector is not strictly increasing (duplicate or descending knots)."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"knots not strictly increasing at index {index}")


class DegenerateInterval(LSplineError):
    """Requested interval [a, b] has a >= b."""


class InvalidRatio(LSplineError):
    """Geometric mesh ratio must be > 0."""


class EpsilonOutOfRange(LSplineError):
    """Model-example epsilon must lie strictly inside (0, pi/lambda)."""


class TrigSingularInterval(LSplineError):
    """A trigonometric interval has lambda*h at or beyond pi.

    Lagrange interpolation by {sin, cos} is insoluble on an interval of
    length pi/lambda, so no hat basis exists there.
    """

    def __init__(self, interval_index: int, lam_h: float):
        self.interval_index = interval_index
        self.lam_h = lam_h
        super().__init__(
            f"interval {interval_index} has lambda*h = {lam_h:.6g} >= pi; "
            "no ramp basis exists"
        )


class OutOfDomain(LSplineError):
    """Evaluation point lies outside [a, b]."""


class QuadratureNonConvergence(LSplineError):
    """Adaptive quadrature hit its refinement cap before reaching tolerance."""


class NotPositiveDefinite(LSplineError):
    """Gram factorization produced a non-positive pivot (construction bug)."""


class TauOutOfRange(LSplineError):
    """Trig bound argument tau must lie in the open interval (0, pi)."""
