"""Exception hierarchy shared across the library.

Two families matter for the CLI exit-code contract: validation problems
(bad specs, incompatible grids) map to exit code 1, while violated math
hypotheses and numerical failures map to exit code 2.
"""


class WrtError(Exception):
    """Base class for all library errors."""


class ValidationError(WrtError):
    """Malformed input: bad spec, grid mismatch, illegal parameter."""


class HypothesisError(WrtError):
    """A method hypothesis is violated (odd window, h(a)=0, ...)."""


class NumericalError(WrtError):
    """A computation failed numerically (non-convergence, ill-posed band)."""


class ZeroReferenceError(ValidationError):
    """Relative error against an identically-zero reference field."""
