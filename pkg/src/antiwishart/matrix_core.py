"""Dense matrix arithmetic over the real and complex fields.

Matrices are 2-D numpy arrays (float64 or complex128). The elimination kernels
work on Python lists because at the sizes this package targets (d <= 16) that
beats per-row numpy calls by a wide margin.

Row/column labels of :func:`bordered` are 1-based so that ``bordered(omega, i, l, m)``
reads like Omega_[i],lm. Everything else uses ordinary 0-based numpy indexing.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import ASYMMETRY_TOL, PIVOT_TOL, matrix_scale
from .errors import DimensionError, NotSelfAdjointError, SingularityError


def _as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def conj_transpose(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose; plain transpose for real input."""
    a = np.asarray(m)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    return a.conj().T.copy()


def hermitize_upper(m: np.ndarray) -> np.ndarray:
    """Copy the upper triangle onto the lower one by conjugation.

    The result is self-adjoint to the bit and has an exactly real diagonal.
    """
    a = np.array(m, copy=True)
    lower, diag = _triangle_indices(a.shape[0])
    a[lower] = a.T[lower].conj()
    if np.iscomplexobj(a):
        a[diag] = a[diag].real
    return a


@functools.lru_cache(maxsize=64)
def _triangle_indices(d: int):
    return np.tril_indices(d, -1), np.diag_indices(d)


def gram(a: np.ndarray) -> np.ndarray:
    """Omega = A^dagger A, k x k for an n x k input."""
    a = np.asarray(a)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(np.float64, copy=False)
    return hermitize_upper(a.conj().T @ a)


def asymmetry(m: np.ndarray) -> float:
    """max |m_ij - conj(m_ji)|, including the imaginary part of the diagonal."""
    a = _as_square(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def validate_hermitian(m: np.ndarray, rel_tol: float = ASYMMETRY_TOL) -> np.ndarray:
    """Check an externally supplied matrix and return its exactly self-adjoint version.

    Raises NotSelfAdjointError when the asymmetry exceeds ``rel_tol * max|entry|``.
    The returned matrix averages each entry with the conjugate of its mirror.
    """
    a = _as_square(m)
    if a.size == 0:
        return a.copy()
    threshold = rel_tol * float(np.max(np.abs(a)))
    defect = asymmetry(a)
    if defect > threshold:
        raise NotSelfAdjointError(defect, threshold)
    return hermitize_upper((a + a.conj().T) / 2)


# --------------------------------------------------------------------------- LU


@dataclass(frozen=True)
class LU:
    """Packed LU factors with partial pivoting: P A = L U, unit-diagonal L.

    ``factors`` holds U on and above the diagonal and the multipliers of L below.
    ``perm[i]`` is the original row that ended up in position i.
    """

    factors: tuple[tuple[complex, ...], ...]
    perm: tuple[int, ...]
    sign: int
    is_complex: bool

    @property
    def dim(self) -> int:
        return len(self.perm)

    @property
    def pivots(self) -> list:
        return [self.factors[i][i] for i in range(self.dim)]

    def det(self):
        d = self.sign * (1 + 0j if self.is_complex else 1.0)
        for p in self.pivots:
            d *= p
        return d

    def condition_estimate(self) -> float:
        """Ratio of largest to smallest |pivot|; inf when a pivot is exactly zero."""
        mags = [abs(p) for p in self.pivots]
        if not mags:
            return 1.0
        smallest = min(mags)
        return float("inf") if smallest == 0 else max(mags) / smallest

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Solve A x = b for a vector or a matrix of right-hand sides."""
        rhs = np.asarray(b)
        vector = rhs.ndim == 1
        cols = rhs.reshape(self.dim, -1)
        d = self.dim
        lu = self.factors
        if any(p == 0 for p in self.pivots):
            raise SingularityError("cannot solve with a singular factorization", 0.0)
        out = np.empty(cols.shape, dtype=np.result_type(cols, complex if self.is_complex else float))
        for c in range(cols.shape[1]):
            y = [cols[self.perm[i], c].item() for i in range(d)]
            for i in range(1, d):
                row = lu[i]
                acc = y[i]
                for j in range(i):
                    acc -= row[j] * y[j]
                y[i] = acc
            for i in range(d - 1, -1, -1):
                row = lu[i]
                acc = y[i]
                for j in range(i + 1, d):
                    acc -= row[j] * y[j]
                y[i] = acc / row[i]
            out[:, c] = y
        return out[:, 0] if vector else out


def lu_factor(m: np.ndarray) -> LU:
    """LU factorization with partial (row) pivoting.

    A column that is exactly zero on and below the diagonal leaves a zero pivot
    in place; the factorization itself never fails.
    """
    a = _as_square(m)
    is_complex = bool(np.iscomplexobj(a))
    rows = a.astype(np.complex128 if is_complex else np.float64).tolist()
    d = len(rows)
    perm = list(range(d))
    sign = 1
    for j in range(d):
        p = max(range(j, d), key=lambda r: abs(rows[r][j]))
        if p != j:
            rows[j], rows[p] = rows[p], rows[j]
            perm[j], perm[p] = perm[p], perm[j]
            sign = -sign
        pivot_row = rows[j]
        piv = pivot_row[j]
        if piv == 0:
            continue
        for r in range(j + 1, d):
            row = rows[r]
            f = row[j] / piv
            row[j] = f
            if f:
                for c in range(j + 1, d):
                    row[c] -= f * pivot_row[c]
    return LU(tuple(tuple(r) for r in rows), tuple(perm), sign, is_complex)


def determinant(m: np.ndarray):
    """Determinant by LU with partial pivoting; the empty matrix has determinant 1.

    Returns a Python float for real input and a complex for complex input.
    """
    a = _as_square(m)
    if a.shape[0] == 0:
        return 1 + 0j if np.iscomplexobj(a) else 1.0
    return lu_factor(a).det()


def inverse(m: np.ndarray, pivot_tol: float = PIVOT_TOL) -> np.ndarray:
    a = _as_square(m)
    lu = lu_factor(a)
    _check_pivots(lu, pivot_tol * matrix_scale(a), "matrix is singular")
    return lu.solve(np.eye(a.shape[0], dtype=a.dtype))


def _check_pivots(lu: LU, threshold: float, message: str) -> None:
    for p in lu.pivots:
        if abs(p) <= threshold:
            raise SingularityError(message, p)


# ------------------------------------------------------------ minors and blocks


def leading_principal(omega: np.ndarray, i: int) -> np.ndarray:
    """Omega_[i]: the top-left i x i block (empty for i = 0)."""
    a = _as_square(omega)
    if not 0 <= i <= a.shape[0]:
        raise DimensionError(f"leading block order {i} outside [0, {a.shape[0]}]")
    return a[:i, :i].copy()


def bordered(omega: np.ndarray, i: int, l: int, m: int) -> np.ndarray:
    """Omega_[i],lm: Omega_[i] with row l and column m of Omega adjoined (1-based l, m).

    The last column is (w_1m ... w_im, w_lm), the last row (w_l1 ... w_li, w_lm).
    Not self-adjoint unless l == m.
    """
    a = _as_square(omega)
    d = a.shape[0]
    if not 0 <= i < d:
        raise DimensionError(f"body order {i} outside [0, {d})")
    if not (i < l <= d and i < m <= d):
        raise DimensionError(f"labels (l={l}, m={m}) must lie in ({i}, {d}]")
    rows = list(range(i)) + [l - 1]
    cols = list(range(i)) + [m - 1]
    return a[np.ix_(rows, cols)].copy()


@dataclass(frozen=True)
class BlockDecomposition:
    """Omega = [[corner, border^dagger], [border, body]]."""

    corner: complex | float
    border: np.ndarray
    body: np.ndarray

    def assemble(self) -> np.ndarray:
        d = self.body.shape[0] + 1
        dtype = np.result_type(self.body, self.border, type(self.corner))
        out = np.empty((d, d), dtype=dtype)
        out[0, 0] = self.corner
        out[1:, 0] = self.border
        out[0, 1:] = self.border.conj()
        out[1:, 1:] = self.body
        return out


def block_decompose(omega: np.ndarray) -> BlockDecomposition:
    a = _as_square(omega)
    if a.shape[0] == 0:
        raise DimensionError("cannot decompose the empty matrix")
    return BlockDecomposition(a[0, 0].item(), a[1:, 0].copy(), a[1:, 1:].copy())


@dataclass(frozen=True)
class BlockInverse:
    """Inverse of [[M, psi], [psi^dagger, sigma]] written as [[A, b], [b^dagger, c]]."""

    a_block: np.ndarray
    b_vec: np.ndarray
    c_scalar: complex | float

    def assemble(self) -> np.ndarray:
        d = self.a_block.shape[0] + 1
        dtype = np.result_type(self.a_block, self.b_vec, type(self.c_scalar))
        out = np.empty((d, d), dtype=dtype)
        out[:-1, :-1] = self.a_block
        out[:-1, -1] = self.b_vec
        out[-1, :-1] = self.b_vec.conj()
        out[-1, -1] = self.c_scalar
        return out


def block_inverse(omega: np.ndarray, pivot_tol: float = PIVOT_TOL) -> BlockInverse:
    """Inverse of a self-adjoint matrix via its trailing Schur complement.

    With M the leading (d-1) block, psi the last column above the corner and
    sigma the corner::

        c = 1 / (sigma - psi^dagger M^-1 psi)
        b = -c M^-1 psi
        A = M^-1 - M^-1 psi b^dagger
    """
    a = _as_square(omega)
    d = a.shape[0]
    if d < 2:
        raise DimensionError("block inverse needs dimension >= 2")
    threshold = pivot_tol * matrix_scale(a)
    body = a[:-1, :-1]
    psi = a[:-1, -1]
    sigma = a[-1, -1].item()
    lu = lu_factor(body)
    _check_pivots(lu, threshold, "leading block is singular")
    body_inv = lu.solve(np.eye(d - 1, dtype=body.dtype))
    x = body_inv @ psi
    schur = sigma - (psi.conj() @ x).item()
    if abs(schur) <= threshold:
        raise SingularityError("Schur complement vanishes", schur)
    c = 1 / schur
    b = -c * x
    a_block = body_inv - np.outer(x, b.conj())
    if not np.iscomplexobj(a):
        c = float(np.real(c))
        b = b.real
        a_block = a_block.real
    return BlockInverse(a_block, b, c)


def leading_minors(omega: np.ndarray, upto: int | None = None) -> list:
    """[det Omega_[0], det Omega_[1], ..., det Omega_[upto]]."""
    a = _as_square(omega)
    n = a.shape[0] if upto is None else upto
    return [determinant(a[:i, :i]) for i in range(n + 1)]


def is_positive_definite(omega: np.ndarray, order: int | None = None) -> bool:
    """Sylvester test on the leading minors up to ``order`` (default: all)."""
    return all(np.real(d) > 0 for d in leading_minors(omega, order)[1:])


def random_hermitian(rng: np.random.Generator, dim: int, complex_field: bool = True) -> np.ndarray:
    """Hermitian (or real symmetric) matrix with Gaussian entries, for fuzzing."""
    x = rng.standard_normal((dim, dim))
    if complex_field:
        x = x + 1j * rng.standard_normal((dim, dim))
    return hermitize_upper((x + x.conj().T) / 2)


def max_entry(m: np.ndarray | Sequence) -> float:
    a = np.asarray(m)
    return 0.0 if a.size == 0 else float(np.max(np.abs(a)))
