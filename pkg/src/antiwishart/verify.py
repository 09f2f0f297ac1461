"""Monte Carlo and algebraic checks of the analytic results.

All Monte Carlo routines draw trial t from ``sample_gaussian(spec, t)``, so a
run is a pure function of (spec, trials). ``workers > 1`` spreads contiguous
index ranges over processes and reassembles them in index order before any
reduction, so the reported numbers do not depend on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import JACOBI_MAX_SWEEPS, JACOBI_TOL, VANISH_TOL, Field, matrix_scale
from .ensemble import EnsembleSpec, sample_gaussian, sample_wishart, trial_generator
from .errors import ConvergenceError, DimensionError, DomainError
from .matrix_core import (
    _as_square,
    bordered,
    conj_transpose,
    determinant,
    gram,
    hermitize_upper,
    leading_principal,
    random_hermitian,
)

MAX_EIGEN_DIM = 256


# ------------------------------------------------------------------ eigenvalues


@dataclass(frozen=True)
class HermEigenResult:
    eigenvalues: np.ndarray
    max_offdiag_residual: float
    sweeps: int


def _max_offdiag(a: np.ndarray) -> float:
    d = a.shape[0]
    if d < 2:
        return 0.0
    off = np.abs(a).copy()
    off[np.diag_indices(d)] = 0.0
    return float(off.max())


def herm_eigenvalues(
    omega: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> HermEigenResult:
    """Eigenvalues of a self-adjoint matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the (p, q) entry with a diagonal
    unitary, then applies the usual real rotation. Converged when the largest
    off-diagonal magnitude is below ``tol * matrix_scale(omega)``. Simple and
    robust at desk scale; O(d^3) per sweep with a large constant.
    """
    a = _as_square(omega)
    d = a.shape[0]
    if d > MAX_EIGEN_DIM:
        raise DimensionError(f"Jacobi solver limited to dim <= {MAX_EIGEN_DIM}, got {d}")
    is_complex = bool(np.iscomplexobj(a))
    w = hermitize_upper(a.astype(np.complex128 if is_complex else np.float64))
    threshold = tol * matrix_scale(a)
    skip = 0.01 * threshold
    sweeps = 0
    off = _max_offdiag(w)
    while off >= threshold:
        if sweeps == max_sweeps:
            raise ConvergenceError(off, sweeps)
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = w[p, q]
                mag = abs(g)
                if mag < skip:
                    continue
                phi = (w[q, q].real - w[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(phi) + math.sqrt(phi * phi + 1.0))
                if phi < 0:
                    t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phase = np.conj(g / mag)
                rot = np.array([[c, s], [-s * phase, c * phase]])
                idx = [p, q]
                w[:, idx] = w[:, idx] @ rot
                w[idx, :] = rot.conj().T @ w[idx, :]
                w[p, q] = w[q, p] = 0.0
                if is_complex:
                    w[p, p] = w[p, p].real
                    w[q, q] = w[q, q].real
        sweeps += 1
        off = _max_offdiag(w)
    eig = np.sort(np.real(np.diag(w)))
    return HermEigenResult(eig, off, sweeps)


def spectra(a: np.ndarray, tol: float = JACOBI_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Ascending spectra of A A^dagger (n x n) and A^dagger A (k x k)."""
    a = np.asarray(a)
    outer = herm_eigenvalues(gram(conj_transpose(a)), tol).eigenvalues
    inner = herm_eigenvalues(gram(a), tol).eigenvalues
    return outer, inner


def spectral_coincidence(a: np.ndarray, tol: float = VANISH_TOL) -> bool:
    """Nonzero spectra of A A^dagger and A^dagger A coincide; the surplus is zero.

    The smaller spectrum must match the top min(n, k) values of the larger one
    within ``tol * scale``, and the remaining |k - n| values of the larger one must
    be below ``tol * scale``. ``scale`` is the larger of the two matrix scales.
    """
    a = np.asarray(a)
    outer, inner = spectra(a)
    scale = max(matrix_scale(gram(conj_transpose(a))), matrix_scale(gram(a)))
    small, large = (outer, inner) if len(outer) <= len(inner) else (inner, outer)
    r = len(small)
    bound = tol * scale
    if np.any(np.abs(large[len(large) - r :] - small) >= bound):
        return False
    return bool(np.all(np.abs(large[: len(large) - r]) < bound))


# --------------------------------------------------------------- trial sharding


def _run_chunk(job: tuple) -> list:
    func, args, start, stop = job
    return [func(*args, t) for t in range(start, stop)]


def map_trials(func: Callable, args: tuple, trials: int, workers: int = 1) -> list:
    """[func(*args, t) for t in range(trials)], optionally over worker processes."""
    if workers <= 1 or trials < 2:
        return _run_chunk((func, args, 0, trials))
    bounds = np.linspace(0, trials, min(workers, trials) + 1).astype(int)
    jobs = [(func, args, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        parts = list(pool.map(_run_chunk, jobs))
    return [x for part in parts for x in part]


def _mean_and_stderr(values: list[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((x - mean) ** 2 for x in values) / (n - 1)
    return mean, math.sqrt(var / n)


# ---------------------------------------------------------------------- moments


@dataclass(frozen=True)
class MomentReport:
    moment_order: int
    empirical: float
    analytic: float
    mc_stderr: float
    trials: int
    passed: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "passed", abs(self.empirical - self.analytic) <= 3 * self.mc_stderr
        )

    def to_dict(self) -> dict:
        return {
            "moment_order": self.moment_order,
            "empirical": self.empirical,
            "analytic": self.analytic,
            "mc_stderr": self.mc_stderr,
            "trials": self.trials,
            "pass": self.passed,
        }


def analytic_trace_moment(n: int, k: int, field: Field | str, order: int) -> float:
    """E tr Omega^order under exp(-tr A^dagger A).

    Complex: nk and nk(n+k). Real (entry variance 1/2): nk/2 and nk(n+k+1)/4.
    """
    fld = Field(field)
    if order == 1:
        return float(n * k) if fld is Field.COMPLEX else n * k / 2
    if order == 2:
        return float(n * k * (n + k)) if fld is Field.COMPLEX else n * k * (n + k + 1) / 4
    raise DomainError(f"moment order must be 1 or 2, got {order}")


def _trace_power(spec: EnsembleSpec, order: int, index: int) -> float:
    omega = sample_wishart(spec, index)
    if order == 1:
        return float(np.real(np.trace(omega)))
    return float(np.sum(np.abs(omega) ** 2))


def moment_test(spec: EnsembleSpec, order: int, trials: int, workers: int = 1) -> MomentReport:
    """Empirical mean of tr Omega^order against its exact value, 3-sigma band."""
    if trials < 100:
        raise DomainError(f"moment test needs at least 100 trials, got {trials}")
    analytic = analytic_trace_moment(spec.n, spec.k, spec.field, order)
    values = map_trials(_trace_power, (spec, order), trials, workers)
    mean, err = _mean_and_stderr(values)
    return MomentReport(order, mean, analytic, err, trials)


@dataclass(frozen=True)
class GammaShapeReport:
    n: int
    mean: MomentReport
    variance: MomentReport

    @property
    def passed(self) -> bool:
        return self.mean.passed and self.variance.passed

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean.to_dict(),
            "variance": self.variance.to_dict(),
            "pass": self.passed,
        }


def _scalar_wishart(spec: EnsembleSpec, index: int) -> float:
    return float(np.real(sample_wishart(spec, index)[0, 0]))


def gamma_shape_test(n: int, trials: int, seed: int = 0, workers: int = 1) -> GammaShapeReport:
    """Omega for a complex n x 1 matrix is a scalar with density w^(n-1) e^(-w).

    Checks mean and variance (both n for Gamma(n, 1)). The standard error of the
    sample variance is estimated as sqrt((m4 - s^4) / N).
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if trials < 1000:
        raise DomainError(f"gamma shape test needs at least 1000 trials, got {trials}")
    spec = EnsembleSpec(n, 1, Field.COMPLEX, seed)
    x = map_trials(_scalar_wishart, (spec,), trials, workers)
    mean, mean_err = _mean_and_stderr(x)
    dev2 = [(v - mean) ** 2 for v in x]
    var = math.fsum(dev2) / (trials - 1)
    m4 = math.fsum(d * d for d in dev2) / trials
    var_err = math.sqrt(max(m4 - var * var, 0.0) / trials)
    return GammaShapeReport(
        n,
        MomentReport(1, mean, float(n), mean_err, trials),
        MomentReport(2, var, float(n), var_err, trials),
    )


# ------------------------------------------------------------- identity fuzzing


def identity_residual(omega: np.ndarray, i: int, l: int, m: int) -> float:
    """Relative defect of the bordered-minor identity at (i, l, m), 1 <= i, l, m >= 1.

    det O_[i-1] det O_[i],l+i,m+i  =  det O_[i-1],l+i,m+i det O_[i-1],i,i
                                      - det O_[i-1],l+i,i det O_[i-1],i,m+i

    Normalized by the largest of |lhs| and the two products on the right.
    """
    lhs = determinant(leading_principal(omega, i - 1)) * determinant(
        bordered(omega, i, l + i, m + i)
    )
    t1 = determinant(bordered(omega, i - 1, l + i, m + i)) * determinant(
        bordered(omega, i - 1, i, i)
    )
    t2 = determinant(bordered(omega, i - 1, l + i, i)) * determinant(
        bordered(omega, i - 1, i, m + i)
    )
    denom = max(abs(lhs), abs(t1), abs(t2))
    if denom == 0:
        return 0.0
    return abs(lhs - (t1 - t2)) / denom


@dataclass(frozen=True)
class IdentityFuzzReport:
    trials: int
    max_residual: float
    threshold: float
    worst: dict

    @property
    def passed(self) -> bool:
        return self.max_residual < self.threshold

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "max_residual": self.max_residual,
            "threshold": self.threshold,
            "worst": self.worst,
            "pass": self.passed,
        }


def identity_fuzz(
    trials: int,
    dim_range: tuple[int, int] = (3, 8),
    seed: int = 0,
    threshold: float = 1e-8,
) -> IdentityFuzzReport:
    """Evaluate the identity on random Hermitian matrices at random valid (i, l, m)."""
    lo, hi = dim_range
    if not 3 <= lo <= hi <= 10:
        raise DomainError(f"dimension range must lie within [3, 10], got {dim_range}")
    worst = {"residual": 0.0}
    for t in range(trials):
        rng = trial_generator(seed, t)
        dim = int(rng.integers(lo, hi + 1))
        omega = random_hermitian(rng, dim)
        i = int(rng.integers(1, dim))
        l, m = (int(v) for v in rng.integers(1, dim - i + 1, size=2))
        r = identity_residual(omega, i, l, m)
        if r > worst["residual"]:
            worst = {"residual": r, "trial": t, "dim": dim, "i": i, "l": l, "m": m}
    return IdentityFuzzReport(trials, worst["residual"], threshold, worst)


# -------------------------------------------------------------------- histogram


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    total: int
    zero_modes: int

    def to_dict(self) -> dict:
        return {
            "bin_edges": [float(x) for x in self.bin_edges],
            "counts": [int(c) for c in self.counts],
            "total": self.total,
            "zero_modes": self.zero_modes,
        }


def _split_spectrum(spec: EnsembleSpec, zero_tol: float, index: int) -> tuple[list, int]:
    omega = sample_wishart(spec, index)
    lam = herm_eigenvalues(omega).eigenvalues
    cut = zero_tol * matrix_scale(omega)
    nonzero = [float(x) for x in lam if abs(x) >= cut]
    return nonzero, len(lam) - len(nonzero)


def pooled_spectrum(
    spec: EnsembleSpec, trials: int, zero_tol: float = VANISH_TOL, workers: int = 1
) -> tuple[np.ndarray, int]:
    """All nonzero eigenvalues over the trials, plus the number of zero modes."""
    parts = map_trials(_split_spectrum, (spec, zero_tol), trials, workers)
    values = np.array([x for nonzero, _ in parts for x in nonzero])
    return values, sum(z for _, z in parts)


def eigen_histogram(
    spec: EnsembleSpec,
    trials: int,
    bins: int = 50,
    zero_tol: float = VANISH_TOL,
    workers: int = 1,
) -> Histogram:
    """Histogram of the pooled nonzero spectrum on [0, max observed]; zero modes counted apart."""
    if trials < 1:
        raise DomainError("need at least one trial")
    values, zeros = pooled_spectrum(spec, trials, zero_tol, workers)
    top = float(values.max()) if values.size else 1.0
    counts, edges = np.histogram(values, bins=bins, range=(0.0, top))
    return Histogram(edges, counts, int(values.size), zeros)


def random_gaussian_shapes(seed: int, count: int, max_rows: int, max_cols: int):
    """(shape, matrix) pairs of seeded complex Gaussian matrices of random shape."""
    for t in range(count):
        rng = trial_generator(seed, t)
        n = int(rng.integers(1, max_rows + 1))
        k = int(rng.integers(1, max_cols + 1))
        yield (n, k), sample_gaussian(EnsembleSpec(n, k, Field.COMPLEX, seed), t)
