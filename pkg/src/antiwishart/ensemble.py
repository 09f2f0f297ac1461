"""Seeded Gaussian rectangular matrices and their Gram matrices.

Measure convention: P(A) proportional to exp(-tr A^dagger A). A complex entry has
independent real and imaginary parts of variance 1/2 each (E|A_ij|^2 = 1); a real
entry has variance 1/2 as well. The classical real Wishart literature usually
takes unit-variance entries with exp(-tr Omega / 2); multiply by 2 to convert.

Reproducibility: trial ``index`` of a spec draws from its own Philox-4x64 stream,
keyed by the 64-bit seed with the index in the top counter word, so sample t
does not depend on which other samples were drawn, or in what order. Normal
variates come from numpy's ``Generator.standard_normal`` (ziggurat); complex
entries take the real parts from the first n*k variates and the imaginary parts
from the next n*k. Bit-exactness holds for a fixed numpy release.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Field
from .errors import DomainError
from .matrix_core import gram

_SEED_LIMIT = 2**64
_HALF_SQRT = np.sqrt(0.5)


@dataclass(frozen=True)
class EnsembleSpec:
    n: int
    k: int
    field: Field = Field.COMPLEX
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "field", Field(self.field))
        if self.n < 1 or self.k < 1:
            raise DomainError(f"dimensions must be positive, got n={self.n}, k={self.k}")
        if not 0 <= self.seed < _SEED_LIMIT:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def trial_generator(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` under ``seed``."""
    if not 0 <= index < _SEED_LIMIT:
        raise DomainError(f"trial index must fit in 64 bits, got {index}")
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))


def sample_gaussian(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    """n x k matrix drawn from exp(-tr A^dagger A)."""
    rng = trial_generator(spec.seed, index)
    if spec.field is Field.COMPLEX:
        z = rng.standard_normal((2, spec.n, spec.k)) * _HALF_SQRT
        return z[0] + 1j * z[1]
    return rng.standard_normal((spec.n, spec.k)) * _HALF_SQRT


def sample_wishart(spec: EnsembleSpec, index: int = 0) -> np.ndarray:
    """Omega = A^dagger A for A = sample_gaussian(spec, index); rank min(n, k) a.s."""
    return gram(sample_gaussian(spec, index))
