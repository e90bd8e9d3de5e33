"""Typed failure signals used across the package.

Every numerical subsystem raises one of these instead of returning NaN/inf,
so callers (and the CLI/service layer) can distinguish usage errors from
genuine numerical breakdown.
"""


class SteklovLabError(Exception):
    """Base class for all package-specific failures."""


class InvalidArgument(SteklovLabError):
    """Input outside the documented domain of an operation."""


class OverflowSignal(SteklovLabError):
    """Unscaled special-function value overflows; request the scaled form."""


class PoleSignal(SteklovLabError):
    """Evaluation at (or numerically at) a pole of K/Y-type functions."""


class DegenerateFormula(SteklovLabError):
    """Closed-form eigenvalue denominator vanished within tolerance."""


class DegenerateMode(SteklovLabError):
    """Mode normalization failed (zero boundary trace or zero norm)."""


class BranchLoss(SteklovLabError):
    """Eigenvalue branch tracking jumped by more than the guard threshold."""


class RefineNeeded(SteklovLabError):
    """Quadrature or grid did not converge to the requested accuracy."""


class DivergentIntegrand(SteklovLabError):
    """Trial profile produces a non-integrable Rayleigh numerator."""


class InvalidPolygon(SteklovLabError):
    """Polygon is self-intersecting, degenerate or mis-oriented."""
