"""Scalar fields, default tolerances and the matrix scale used by relative checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Field(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"

    @property
    def beta(self) -> int:
        """Dyson index: 1 for real entries, 2 for complex."""
        return 1 if self is Field.REAL else 2

    @property
    def dtype(self) -> type:
        return np.float64 if self is Field.REAL else np.complex128

    @classmethod
    def of(cls, matrix: np.ndarray) -> "Field":
        """Field implied by an array's dtype."""
        return cls.COMPLEX if np.iscomplexobj(matrix) else cls.REAL

    @classmethod
    def coerce(cls, value: "Field | str | None", matrix: np.ndarray | None = None) -> "Field":
        if value is None:
            if matrix is None:
                raise ValueError("field must be given when no matrix is available")
            return cls.of(matrix)
        return cls(value)


# Defaults; every one of them is relative to matrix_scale() of the input.
PIVOT_TOL = 1e-12
VANISH_TOL = 1e-9
CONSTRAINT_TOL = 1e-8
ASYMMETRY_TOL = 1e-8
CONDITION_LIMIT = 1e12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class Tolerances:
    pivot: float = PIVOT_TOL
    vanish: float = VANISH_TOL
    constraint: float = CONSTRAINT_TOL
    asymmetry: float = ASYMMETRY_TOL

    def __post_init__(self) -> None:
        for name in ("pivot", "vanish", "constraint", "asymmetry"):
            if not getattr(self, name) > 0:
                raise ValueError(f"tolerance {name!r} must be positive")


def matrix_scale(matrix: np.ndarray) -> float:
    """max(1, max |entry|); the unit all relative tolerances are measured in."""
    m = np.asarray(matrix)
    if m.size == 0:
        return 1.0
    return max(1.0, float(np.max(np.abs(m))))
