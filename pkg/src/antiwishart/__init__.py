"""Exact finite-size Wishart and Anti-Wishart matrices.

Omega = A^dagger A for a Gaussian n x k matrix A. For n >= k (Wishart) all
entries of Omega are random; for n < k (Anti-Wishart) the bottom-right
(k-n) x (k-n) block is fixed by the first n rows. The package covers the
reduction recursion and its determinant-ratio closed form, reconstruction of
the redundant block, rank detection, unnormalized element and eigenvalue
densities, seeded sampling and a Monte Carlo verification harness.
"""

from .config import Field, Tolerances, matrix_scale
from .density import (
    EigenSample,
    LogDensity,
    Regime,
    log_density_anti_wishart,
    log_density_eigen,
    log_density_elements,
    log_density_wishart,
    regime,
)
from .ensemble import EnsembleSpec, sample_gaussian, sample_wishart
from .errors import (
    AntiWishartError,
    ConvergenceError,
    DimensionError,
    DomainError,
    IllConditionedWarning,
    NotSelfAdjointError,
    PivotError,
    RegimeError,
    SingularityError,
    SingularMinorError,
)
from .matrix_core import (
    BlockDecomposition,
    BlockInverse,
    block_decompose,
    block_inverse,
    bordered,
    conj_transpose,
    determinant,
    gram,
    leading_principal,
    validate_hermitian,
)
from .reconstruction import (
    PartialWishart,
    ResidualReport,
    consistency_check,
    constraint_count,
    reconstruct,
)
from .reduction import (
    RankReport,
    ReductionTrace,
    detect_rank,
    pivot_via_ratio,
    reduce_step,
    reduce_trace,
    reduced_entry_via_ratio,
    reduced_matrix_via_ratio,
)
from .verify import (
    HermEigenResult,
    Histogram,
    MomentReport,
    eigen_histogram,
    gamma_shape_test,
    herm_eigenvalues,
    identity_fuzz,
    moment_test,
    spectral_coincidence,
)

__version__ = "0.1.0"

__all__ = [
    "AntiWishartError",
    "block_decompose",
    "block_inverse",
    "BlockDecomposition",
    "BlockInverse",
    "bordered",
    "conj_transpose",
    "consistency_check",
    "constraint_count",
    "ConvergenceError",
    "detect_rank",
    "determinant",
    "DimensionError",
    "DomainError",
    "eigen_histogram",
    "EigenSample",
    "EnsembleSpec",
    "Field",
    "gamma_shape_test",
    "gram",
    "herm_eigenvalues",
    "HermEigenResult",
    "Histogram",
    "identity_fuzz",
    "IllConditionedWarning",
    "leading_principal",
    "log_density_anti_wishart",
    "log_density_eigen",
    "log_density_elements",
    "log_density_wishart",
    "LogDensity",
    "matrix_scale",
    "moment_test",
    "MomentReport",
    "NotSelfAdjointError",
    "PartialWishart",
    "pivot_via_ratio",
    "PivotError",
    "RankReport",
    "reconstruct",
    "reduce_step",
    "reduce_trace",
    "reduced_entry_via_ratio",
    "reduced_matrix_via_ratio",
    "ReductionTrace",
    "regime",
    "Regime",
    "RegimeError",
    "ResidualReport",
    "sample_gaussian",
    "sample_wishart",
    "SingularityError",
    "SingularMinorError",
    "spectral_coincidence",
    "Tolerances",
    "validate_hermitian",
]
