"""Reduced-matrix recursion and its closed form as ratios of bordered minors.

One step maps a d x d self-adjoint matrix  [[w11, w^dagger], [w, body]]  to
``body - w w^dagger / w11``. Running it j times on Omega gives the same matrix as
reading off ``det Omega_[j],l+j,m+j / det Omega_[j]`` entry by entry, and the
number of steps after which the result vanishes is the number of rows of any A
with Omega = A^dagger A.

Public (l, m) labels are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import PIVOT_TOL, VANISH_TOL, matrix_scale
from .errors import DimensionError, PivotError, SingularMinorError
from .matrix_core import _as_square, bordered, determinant, leading_principal, max_entry


@dataclass(frozen=True)
class ReductionTrace:
    """steps[j] is the reduced matrix after j steps (dimension k - j)."""

    steps: tuple[np.ndarray, ...]
    pivots: tuple[float, ...]
    terminated_at: int | None

    @property
    def borders(self) -> tuple[np.ndarray, ...]:
        return tuple(s[1:, 0] for s in self.steps[: len(self.pivots)])

    @property
    def final(self) -> np.ndarray:
        return self.steps[-1]


@dataclass(frozen=True)
class RankReport:
    detected_n: int
    vanishing_norm: float
    pivot_history: tuple[float, ...]


def reduce_step(
    omega: np.ndarray,
    *,
    pivot_tol: float = PIVOT_TOL,
    scale: float | None = None,
    step: int = 0,
) -> np.ndarray:
    """One application of  Omega -> body - w w^dagger / w11."""
    a = _as_square(omega)
    if a.shape[0] == 0:
        raise DimensionError("cannot reduce the empty matrix")
    if scale is None:
        scale = matrix_scale(a)
    corner = a[0, 0].item()
    threshold = pivot_tol * scale
    if abs(corner) <= threshold:
        raise PivotError(corner, step, threshold)
    w = a[1:, 0]
    r = a[1:, 1:] - np.outer(w, w.conj()) / corner
    # drift control over long traces
    return (r + r.conj().T) / 2


def reduce_trace(
    omega: np.ndarray,
    max_steps: int | None = None,
    tol: float = VANISH_TOL,
    *,
    pivot_tol: float = PIVOT_TOL,
) -> ReductionTrace:
    """Iterate :func:`reduce_step`, stopping once the reduced matrix vanishes.

    A reduced matrix counts as vanished when its max-entry norm is below
    ``max(tol * matrix_scale(omega), NOISE_FACTOR * noise)``, where ``noise`` is a
    first-order estimate of the rounding error carried by the current matrix.
    The estimate only matters after a small (but legitimate) pivot, whose
    relative error is amplified by the division. The empty matrix reached after
    k steps does not count as vanished. Pivots are recorded as reals.
    """
    a = _as_square(omega)
    d = a.shape[0]
    if max_steps is None:
        max_steps = d
    if not 0 <= max_steps <= d:
        raise DimensionError(f"max_steps={max_steps} outside [0, {d}]")
    scale = matrix_scale(a)
    vanish = tol * scale
    noise = _EPS * max_entry(a)
    steps = [a.copy()]
    pivots: list[float] = []
    current = steps[0]
    terminated_at = None
    for j in range(max_steps):
        if max_entry(current) < max(vanish, NOISE_FACTOR * noise):
            terminated_at = j
            break
        pivot = float(np.real(current[0, 0]))
        pivots.append(pivot)
        nxt = reduce_step(current, pivot_tol=pivot_tol, scale=scale, step=j)
        noise = _propagate_noise(noise, current, pivot)
        current = nxt
        steps.append(current)
    else:
        if current.size and max_entry(current) < max(vanish, NOISE_FACTOR * noise):
            terminated_at = len(steps) - 1
    return ReductionTrace(tuple(steps), tuple(pivots), terminated_at)


_EPS = float(np.finfo(np.float64).eps)
NOISE_FACTOR = 16.0


def _propagate_noise(noise: float, current: np.ndarray, pivot: float) -> float:
    """Bound on the absolute error of body - w w^dagger / pivot given entry error ``noise``."""
    w = max_entry(current[1:, 0])
    body = max_entry(current[1:, 1:])
    gain = 1.0 + w / abs(pivot)
    return noise * gain * gain + _EPS * (body + w * w / abs(pivot))


def _minor_threshold(omega: np.ndarray, order: int, pivot_tol: float) -> float:
    return pivot_tol * matrix_scale(omega) ** order


def _leading_det(omega: np.ndarray, i: int, pivot_tol: float):
    det = determinant(leading_principal(omega, i))
    threshold = _minor_threshold(omega, i, pivot_tol)
    if i > 0 and abs(det) <= threshold:
        raise SingularMinorError(i, det, threshold)
    return det


def reduced_entry_via_ratio(
    omega: np.ndarray, i: int, l: int, m: int, *, pivot_tol: float = PIVOT_TOL
):
    """Entry (l, m) of the matrix after i reduction steps, from minors of Omega alone."""
    a = _as_square(omega)
    d = a.shape[0]
    if not 0 <= i < d:
        raise DimensionError(f"step {i} outside [0, {d})")
    if not (1 <= l <= d - i and 1 <= m <= d - i):
        raise DimensionError(f"(l, m) = ({l}, {m}) outside [1, {d - i}]")
    denom = _leading_det(a, i, pivot_tol)
    return determinant(bordered(a, i, l + i, m + i)) / denom


def reduced_matrix_via_ratio(
    omega: np.ndarray, i: int, *, upper_only: bool = False, pivot_tol: float = PIVOT_TOL
) -> np.ndarray:
    """The whole (d-i) x (d-i) reduced matrix by determinant ratios.

    With ``upper_only`` the entries l > m are not evaluated but mirrored from the
    conjugate entries.
    """
    a = _as_square(omega)
    d = a.shape[0]
    if not 0 <= i <= d:
        raise DimensionError(f"step {i} outside [0, {d}]")
    r = d - i
    dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    out = np.zeros((r, r), dtype=dtype)
    if r == 0:
        return out
    denom = _leading_det(a, i, pivot_tol)
    for l in range(1, r + 1):
        for m in range(l if upper_only else 1, r + 1):
            out[l - 1, m - 1] = determinant(bordered(a, i, l + i, m + i)) / denom
    if upper_only:
        lower = np.tril_indices(r, -1)
        out[lower] = out.T[lower].conj()
    return out


def pivot_via_ratio(omega: np.ndarray, i: int, *, pivot_tol: float = PIVOT_TOL):
    """Pivot used at step i: det Omega_[i+1] / det Omega_[i]."""
    a = _as_square(omega)
    d = a.shape[0]
    if not 0 <= i < d:
        raise DimensionError(f"step {i} outside [0, {d})")
    denom = _leading_det(a, i, pivot_tol)
    return determinant(leading_principal(a, i + 1)) / denom


def detect_rank(
    omega: np.ndarray, tol: float = VANISH_TOL, *, pivot_tol: float = PIVOT_TOL
) -> RankReport:
    """Number of rows of A behind Omega = A^dagger A, with no access to A.

    Counts the reduction steps taken before the reduced matrix vanishes; a trace
    that runs to the empty matrix reports the full dimension and a vanishing norm of 0.
    Raises PivotError for non-generic input (a pivot vanishes first).
    """
    trace = reduce_trace(omega, tol=tol, pivot_tol=pivot_tol)
    if trace.terminated_at is None:
        n = len(trace.pivots)
        norm = max_entry(trace.final)
    else:
        n = trace.terminated_at
        norm = max_entry(trace.steps[n])
    return RankReport(n, norm, trace.pivots)
