"""Log unnormalized densities of Wishart-type matrices and of their spectra.

Nothing here is normalized: every value is the log of the density with its
constant prefactor dropped. Differences of log values at fixed (n, k, field)
are meaningful; absolute values are not probabilities.

Element densities (k = dim Omega, e the determinant exponent):

* Wishart, n >= k:       e log det Omega - tr Omega
* Anti-Wishart, n < k:   e log det Omega_[n] - tr Omega, on the constraint surface

with e = n - k for complex entries and (n - k - 1)/2 for real entries. The Dirac
factors of the Anti-Wishart case are represented by the constraint residual.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import CONSTRAINT_TOL, Field, matrix_scale
from .errors import DimensionError, DomainError, NumericalSingularityError, RegimeError
from .matrix_core import _as_square, leading_minors
from .reconstruction import consistency_check

NEG_INF = -math.inf


class Regime(str, enum.Enum):
    WISHART = "wishart"
    ANTI_WISHART = "anti-wishart"


def regime(n: int, k: int) -> Regime:
    """Wishart iff n >= k (the boundary n = k is Wishart, with exponent 0)."""
    if n < 1 or k < 1:
        raise DomainError(f"dimensions must be positive, got n={n}, k={k}")
    return Regime.WISHART if n >= k else Regime.ANTI_WISHART


@dataclass(frozen=True)
class LogDensity:
    log_value: float
    support_ok: bool
    residual_max: float | None = None


def determinant_exponent(n: int, k: int, field: Field | str) -> float:
    return float(n - k) if Field(field) is Field.COMPLEX else (n - k - 1) / 2


def _positive_minor(omega: np.ndarray, order: int) -> float | None:
    """det Omega_[order] if Omega_[order] is positive definite, else None."""
    minors = leading_minors(omega, order)
    if any(not np.real(d) > 0 for d in minors[1:]):
        return None
    return float(np.real(minors[-1]))


def log_density_wishart(omega: np.ndarray, n: int, field: Field | str | None = None) -> LogDensity:
    a = _as_square(omega)
    k = a.shape[0]
    fld = Field.coerce(field, a)
    if n < k:
        raise RegimeError(f"Wishart density needs n >= k, got n={n}, k={k}")
    det = _positive_minor(a, k)
    if det is None:
        return LogDensity(NEG_INF, False)
    e = determinant_exponent(n, k, fld)
    trace = float(np.real(np.trace(a)))
    return LogDensity(e * math.log(det) - trace, True)


def log_density_anti_wishart(
    omega: np.ndarray,
    n: int,
    field: Field | str | None = None,
    constraint_tol: float = CONSTRAINT_TOL,
) -> LogDensity:
    """Free-part log density plus the constraint residual.

    Accepts n = k as the degenerate case with no constraints, which makes the
    boundary checkable against :func:`log_density_wishart`.
    """
    a = _as_square(omega)
    k = a.shape[0]
    fld = Field.coerce(field, a)
    if n < 1 or n > k:
        raise RegimeError(f"Anti-Wishart density needs 1 <= n <= k, got n={n}, k={k}")
    det = _positive_minor(a, n)
    if det is None:
        return LogDensity(NEG_INF, False)
    residual = 0.0
    if n < k:
        try:
            residual = consistency_check(a, n, fld).max_abs
        except NumericalSingularityError:
            return LogDensity(NEG_INF, False)
    if residual >= constraint_tol * matrix_scale(a):
        return LogDensity(NEG_INF, False, residual)
    e = determinant_exponent(n, k, fld)
    trace = float(np.real(np.trace(a)))
    return LogDensity(e * math.log(det) - trace, True, residual)


def log_density_elements(
    omega: np.ndarray,
    n: int,
    field: Field | str | None = None,
    constraint_tol: float = CONSTRAINT_TOL,
) -> LogDensity:
    """Log unnormalized density of the matrix elements of Omega = A^dagger A, A n x k.

    Support failures (not positive definite, off the constraint surface) come
    back as ``support_ok=False`` with a -inf log value rather than an exception.
    """
    a = _as_square(omega)
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if regime(n, a.shape[0]) is Regime.WISHART:
        return log_density_wishart(a, n, field)
    return log_density_anti_wishart(a, n, field, constraint_tol)


@dataclass(frozen=True)
class EigenSample:
    """Eigenvalues entering the joint density: k of them for n >= k, else the n nonzero ones."""

    values: tuple[float, ...]
    beta: int
    n: int
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.beta not in (1, 2):
            raise DomainError(f"beta must be 1 or 2, got {self.beta}")
        expected = self.k if regime(self.n, self.k) is Regime.WISHART else self.n
        if len(self.values) != expected:
            raise DimensionError(
                f"(n={self.n}, k={self.k}) needs {expected} eigenvalues, got {len(self.values)}"
            )

    @classmethod
    def from_values(cls, values: Sequence[float], n: int, k: int, field: Field | str = Field.COMPLEX):
        return cls(tuple(values), Field(field).beta, n, k)


def eigen_exponent(n: int, k: int, beta: int) -> float:
    gap = n - k if n >= k else k - n
    return float(gap) if beta == 2 else (gap - 1) / 2


def log_density_eigen(sample: EigenSample) -> float:
    """sum_i [a log l_i - l_i] + beta sum_{i<j} log|l_i - l_j|, unnormalized.

    a = |n - k| for beta = 2 and (|n - k| - 1)/2 for beta = 1. Coincident
    eigenvalues give -inf. Values are sorted first, so the result is exactly
    invariant under permutations of the input.
    """
    lam = sorted(sample.values)
    if lam and lam[0] < 0:
        raise DomainError(f"eigenvalues must be nonnegative, got {lam[0]}")
    a = eigen_exponent(sample.n, sample.k, sample.beta)
    terms = []
    for x in lam:
        if a != 0:
            terms.append(a * math.log(x) if x > 0 else -math.copysign(math.inf, a))
        terms.append(-x)
    for i in range(len(lam)):
        for j in range(i + 1, len(lam)):
            gap = lam[j] - lam[i]
            if gap == 0:
                return NEG_INF
            terms.append(sample.beta * math.log(gap))
    if NEG_INF in terms:
        return NEG_INF
    return math.fsum(terms)
