"""Recover the redundant block of an Anti-Wishart matrix from its first n rows.

For Omega = A^dagger A with A of size n x k, n < k, the bordered minors
det Omega_[n],lm vanish for every l, m > n. The determinant is affine in the
corner w_lm with slope det Omega_[n], so each condition has the single root

    w_lm = (w_l1 ... w_ln) Omega_[n]^-1 (w_1m ... w_nm)^T.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .config import ASYMMETRY_TOL, CONDITION_LIMIT, PIVOT_TOL, Field, matrix_scale
from .errors import (
    DimensionError,
    IllConditionedWarning,
    NotSelfAdjointError,
    RegimeError,
    SingularMinorError,
)
from .matrix_core import _as_square, asymmetry, hermitize_upper, lu_factor
from .reduction import reduced_matrix_via_ratio


def constraint_count(n: int, k: int, field: Field | str) -> int:
    """Independent real constraints carried by the redundant block.

    (k-n)^2 for complex entries (real diagonal plus conjugate pairs),
    (k-n)(k-n+1)/2 for real symmetric ones.
    """
    if n >= k:
        raise RegimeError(f"no redundant block for n={n} >= k={k}")
    r = k - n
    return r * r if Field(field) is Field.COMPLEX else r * (r + 1) // 2


@dataclass(frozen=True)
class PartialWishart:
    """The first n rows of a k x k Gram matrix, n < k.

    ``closure`` is the full k x k array with rows n+1..k, columns 1..n filled by
    conjugation and the unknown block set to NaN.
    """

    known_rows: np.ndarray
    field: Field | str | None = None
    closure: np.ndarray = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        rows = np.asarray(self.known_rows)
        if rows.ndim != 2:
            raise DimensionError(f"known rows must be 2-D, got shape {rows.shape}")
        n, k = rows.shape
        if n < 1:
            raise DimensionError("need at least one known row")
        if n >= k:
            raise RegimeError(f"reconstruction needs n < k, got n={n}, k={k}")
        fld = Field.coerce(self.field, rows)
        rows = rows.astype(fld.dtype)
        head = rows[:, :n]
        threshold = ASYMMETRY_TOL * max(1e-300, float(np.max(np.abs(head))))
        defect = asymmetry(head)
        if defect > threshold:
            raise NotSelfAdjointError(defect, threshold)
        closure = np.full((k, k), np.nan, dtype=fld.dtype)
        closure[:n, :] = rows
        closure[n:, :n] = rows[:, n:].conj().T
        object.__setattr__(self, "known_rows", rows)
        object.__setattr__(self, "field", fld)
        object.__setattr__(self, "closure", closure)

    @classmethod
    def from_matrix(cls, omega: np.ndarray, n: int, field: Field | str | None = None) -> "PartialWishart":
        a = _as_square(omega)
        return cls(a[:n, :].copy(), field)

    @property
    def n(self) -> int:
        return self.known_rows.shape[0]

    @property
    def k(self) -> int:
        return self.known_rows.shape[1]


def reconstruct(
    partial: PartialWishart,
    *,
    pivot_tol: float = PIVOT_TOL,
    condition_limit: float = CONDITION_LIMIT,
) -> np.ndarray:
    """Complete the k x k self-adjoint matrix from its first n rows.

    One LU factorization of Omega_[n] serves every redundant entry. Known entries
    are passed through unchanged. Emits IllConditionedWarning when the pivot-ratio
    condition estimate of Omega_[n] exceeds ``condition_limit``.
    """
    n = partial.n
    rows = partial.known_rows
    head = rows[:, :n]
    lu = lu_factor(head)
    det = lu.det()
    threshold = pivot_tol * matrix_scale(head) ** n
    if abs(det) <= threshold or any(p == 0 for p in lu.pivots):
        raise SingularMinorError(n, det, threshold)
    cond = lu.condition_estimate()
    if cond > condition_limit:
        warnings.warn(
            f"leading block Omega_[{n}] is ill-conditioned (pivot ratio {cond:.3e})",
            IllConditionedWarning,
            stacklevel=2,
        )
    tail = rows[:, n:]
    block = tail.conj().T @ lu.solve(tail)
    if partial.field is Field.REAL:
        block = block.real
    out = partial.closure.copy()
    out[n:, n:] = hermitize_upper(block)
    return out


@dataclass(frozen=True)
class ResidualReport:
    """residuals[l-n-1, m-n-1] = det Omega_[n],lm / det Omega_[n]."""

    residuals: np.ndarray
    max_abs: float
    constraint_count: int


def consistency_check(
    omega: np.ndarray,
    n: int,
    field: Field | str | None = None,
    *,
    pivot_tol: float = PIVOT_TOL,
) -> ResidualReport:
    """Evaluate every redundancy constraint of a full matrix from its minors.

    Independent of :func:`reconstruct`: the residuals come straight from bordered
    determinants of ``omega``. For the real field only l <= m is evaluated and
    the lower triangle mirrors it.
    """
    a = _as_square(omega)
    k = a.shape[0]
    fld = Field.coerce(field, a)
    if n < 1:
        raise DimensionError("n must be at least 1")
    if n >= k:
        raise RegimeError(f"no redundant block for n={n} >= k={k}")
    res = reduced_matrix_via_ratio(a, n, upper_only=fld is Field.REAL, pivot_tol=pivot_tol)
    if fld is Field.REAL:
        res = res.real
    return ResidualReport(res, float(np.max(np.abs(res))), constraint_count(n, k, fld))
