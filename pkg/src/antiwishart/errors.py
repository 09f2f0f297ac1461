"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`AntiWishartError`;
the CLI maps the subclasses onto its exit codes.
"""

from __future__ import annotations


class AntiWishartError(Exception):
    """Base class for all package errors."""


class DimensionError(AntiWishartError, ValueError):
    """An index or shape is outside the range an operation accepts."""


class DomainError(AntiWishartError, ValueError):
    """An argument is outside the mathematical domain (negative eigenvalue, n < 1, ...)."""


class NotSelfAdjointError(AntiWishartError, ValueError):
    """A matrix that must be self-adjoint is not, above the asymmetry threshold."""

    def __init__(self, asymmetry: float, threshold: float):
        super().__init__(
            f"matrix is not self-adjoint: max asymmetry {asymmetry:.3e} exceeds {threshold:.3e}"
        )
        self.asymmetry = asymmetry
        self.threshold = threshold


class RegimeError(AntiWishartError, ValueError):
    """Operation requires the Anti-Wishart regime (n < k) and got n >= k, or vice versa."""


class NumericalSingularityError(AntiWishartError, ArithmeticError):
    """Common base for the three singularity flavours below."""


class PivotError(NumericalSingularityError):
    """A recursion pivot vanished while the reduced matrix had not."""

    def __init__(self, pivot: complex | float, step: int, threshold: float):
        super().__init__(
            f"pivot {pivot!r} at reduction step {step} is below tolerance {threshold:.3e}"
        )
        self.pivot = pivot
        self.step = step
        self.threshold = threshold


class SingularMinorError(NumericalSingularityError):
    """A leading principal minor used as a denominator is numerically zero."""

    def __init__(self, order: int, value: complex | float, threshold: float):
        super().__init__(
            f"leading minor of order {order} is {value!r}, below tolerance {threshold:.3e}"
        )
        self.order = order
        self.value = value
        self.threshold = threshold


class SingularityError(NumericalSingularityError):
    """Block inverse impossible: singular body or vanishing Schur complement."""

    def __init__(self, message: str, pivot: complex | float):
        super().__init__(f"{message} (offending pivot {pivot!r})")
        self.pivot = pivot


class ConvergenceError(AntiWishartError, ArithmeticError):
    """The Jacobi eigensolver ran out of sweeps."""

    def __init__(self, residual: float, sweeps: int):
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(max off-diagonal {residual:.3e})"
        )
        self.residual = residual
        self.sweeps = sweeps


class IllConditionedWarning(UserWarning):
    """Reconstruction succeeded but the leading block is badly conditioned."""
