import math

import numpy as np
import pytest

from antiwishart.config import matrix_scale
from antiwishart.ensemble import EnsembleSpec, sample_wishart
from antiwishart.errors import ConvergenceError, DimensionError, DomainError
from antiwishart.matrix_core import determinant, gram
from antiwishart.verify import (
    MomentReport,
    analytic_trace_moment,
    eigen_histogram,
    gamma_shape_test,
    herm_eigenvalues,
    identity_fuzz,
    map_trials,
    moment_test,
    pooled_spectrum,
    random_gaussian_shapes,
    spectra,
    spectral_coincidence,
)

from oracles import complex_gaussian, exponential_cdf, random_hermitian


def test_jacobi_examples():
    np.testing.assert_array_equal(herm_eigenvalues(np.diag([3.0, 1.0, 2.0])).eigenvalues, [1, 2, 3])
    np.testing.assert_allclose(herm_eigenvalues(np.array([[0.0, 1], [1, 0]])).eigenvalues, [-1, 1], atol=1e-15)
    res = herm_eigenvalues(np.array([[2.0, 1j], [-1j, 2.0]]))
    np.testing.assert_allclose(res.eigenvalues, [1, 3], atol=1e-14)
    assert herm_eigenvalues(np.zeros((0, 0))).eigenvalues.shape == (0,)


@pytest.mark.parametrize("complex_field", [True, False])
def test_jacobi_trace_det_and_squares(rng, complex_field):
    for d in (2, 4, 6, 9):
        om = random_hermitian(rng, d, complex_field)
        res = herm_eigenvalues(om)
        lam = res.eigenvalues
        assert len(lam) == d
        assert np.all(np.diff(lam) >= 0)
        scale = matrix_scale(om)
        assert res.max_offdiag_residual < 1e-12 * scale
        tr = np.trace(om).real
        assert abs(lam.sum() - tr) < 1e-9 * scale * d
        tr2 = np.sum(np.abs(om) ** 2)
        assert abs(np.sum(lam**2) - tr2) < 1e-9 * tr2
        det = determinant(om).real
        assert abs(np.prod(lam) - det) < 1e-9 * max(abs(det), 1e-300) + 1e-12 * scale**d


def test_jacobi_against_numpy(rng):
    om = random_hermitian(rng, 12)
    np.testing.assert_allclose(herm_eigenvalues(om).eigenvalues, np.linalg.eigvalsh(om), atol=1e-11)


def test_jacobi_errors(rng):
    with pytest.raises(ConvergenceError) as info:
        herm_eigenvalues(random_hermitian(rng, 8), max_sweeps=1)
    assert info.value.residual > 0
    with pytest.raises(DimensionError):
        herm_eigenvalues(np.eye(257))


def test_spectra_examples():
    outer, inner = spectra(np.array([[1.0, 2.0]]))
    np.testing.assert_allclose(outer, [5])
    np.testing.assert_allclose(inner, [0, 5], atol=1e-14)
    assert spectral_coincidence(np.array([[1.0, 2.0]]))
    assert spectral_coincidence(np.eye(3))


def test_spectral_coincidence_sweep():
    shapes = list(random_gaussian_shapes(8, 200, 12, 12))
    for (n, k), a in shapes:
        a = a if (n <= 6 or k <= 6) else a[:6]
        assert spectral_coincidence(a, 1e-9)


def test_spectral_coincidence_tall_and_wide():
    rng = np.random.default_rng(3)
    for shape in [(6, 12), (12, 6)]:
        for _ in range(20):
            assert spectral_coincidence(complex_gaussian(rng, *shape), 1e-9)


def test_zero_mode_count():
    for n, k in [(1, 4), (2, 5), (3, 7)]:
        for t in range(30):
            om = sample_wishart(EnsembleSpec(n, k, "complex", 2), t)
            lam = herm_eigenvalues(om).eigenvalues
            assert np.sum(np.abs(lam) < 1e-9 * matrix_scale(om)) == k - n


def test_moment_report_pass_rule():
    assert MomentReport(1, 12.2, 12.0, 0.1, 100).passed
    assert not MomentReport(1, 12.31, 12.0, 0.1, 100).passed
    assert MomentReport(1, 11.75, 12.0, 0.1, 100).to_dict()["pass"]


def test_analytic_moments():
    assert analytic_trace_moment(3, 4, "complex", 1) == 12
    assert analytic_trace_moment(3, 4, "complex", 2) == 84
    assert analytic_trace_moment(1, 1, "complex", 1) == 1
    assert analytic_trace_moment(3, 4, "real", 2) == 24
    with pytest.raises(DomainError):
        analytic_trace_moment(3, 4, "complex", 3)


def test_moment_test_3x4():
    for order, value in [(1, 12.0), (2, 84.0)]:
        rep = moment_test(EnsembleSpec(3, 4, "complex", 0), order, 10_000)
        assert rep.analytic == value
        assert rep.passed, rep
    assert moment_test(EnsembleSpec(1, 1, "complex", 0), 1, 1000).passed
    with pytest.raises(DomainError):
        moment_test(EnsembleSpec(1, 1), 1, 99)


def test_moment_test_real():
    for order in (1, 2):
        assert moment_test(EnsembleSpec(2, 5, "real", 4), order, 10_000).passed


def test_moment_test_detects_wrong_analytic():
    rep = moment_test(EnsembleSpec(3, 4, "complex", 0), 1, 10_000)
    wrong = MomentReport(1, rep.empirical, 12.5, rep.mc_stderr, rep.trials)
    assert not wrong.passed


@pytest.mark.parametrize("n", [1, 2, 5])
def test_gamma_shape(n):
    rep = gamma_shape_test(n, 20_000, seed=1)
    assert rep.passed, rep.to_dict()
    assert rep.mean.empirical == pytest.approx(n, rel=0.05)


def test_gamma_shape_errors():
    with pytest.raises(DomainError):
        gamma_shape_test(0, 1000)
    with pytest.raises(DomainError):
        gamma_shape_test(2, 999)


def test_identity_fuzz():
    rep = identity_fuzz(1000, (3, 8), seed=0)
    assert rep.passed, rep.worst
    assert rep.trials == 1000
    assert identity_fuzz(50, (10, 10)).passed
    for bad in [(2, 5), (3, 11), (6, 4)]:
        with pytest.raises(DomainError):
            identity_fuzz(10, bad)


def test_histogram_zero_modes():
    hist = eigen_histogram(EnsembleSpec(2, 5, "complex", 0), 1000)
    assert hist.zero_modes == 3000
    assert hist.total == 2000
    assert hist.counts.sum() == hist.total
    assert hist.bin_edges[0] == 0
    assert np.all(np.diff(hist.bin_edges) > 0)
    assert len(hist.counts) == 50


def test_histogram_exponential_fraction():
    values, zeros = pooled_spectrum(EnsembleSpec(1, 1, "complex", 0), 100_000)
    assert zeros == 0 and len(values) == 100_000
    frac = np.mean(values <= 1.0)
    p = exponential_cdf(1.0)
    assert abs(frac - p) <= 3 * math.sqrt(p * (1 - p) / len(values))
    hist = eigen_histogram(EnsembleSpec(1, 1, "complex", 0), 10_000, bins=20)
    assert hist.total == 10_000 and hist.bin_edges[-1] == values[:10_000].max()


def test_histogram_wishart_has_no_zero_modes():
    hist = eigen_histogram(EnsembleSpec(4, 3, "real", 0), 200, bins=10)
    assert hist.zero_modes == 0 and hist.total == 600


def _square(x, t):
    return x * t * t


def test_map_trials_worker_invariance():
    assert map_trials(_square, (2,), 7, workers=1) == [2 * t * t for t in range(7)]
    assert map_trials(_square, (2,), 7, workers=3) == map_trials(_square, (2,), 7)
    spec = EnsembleSpec(3, 4, "complex", 5)
    one = moment_test(spec, 2, 500, workers=1)
    two = moment_test(spec, 2, 500, workers=2)
    assert one == two
    h1 = eigen_histogram(EnsembleSpec(2, 3), 50, workers=1)
    h2 = eigen_histogram(EnsembleSpec(2, 3), 50, workers=2)
    np.testing.assert_array_equal(h1.counts, h2.counts)
    np.testing.assert_array_equal(h1.bin_edges, h2.bin_edges)


def test_random_gaussian_shapes_deterministic():
    a = [(s, m) for s, m in random_gaussian_shapes(1, 5, 4, 4)]
    b = [(s, m) for s, m in random_gaussian_shapes(1, 5, 4, 4)]
    for (sa, ma), (sb, mb) in zip(a, b):
        assert sa == sb == ma.shape
        assert np.array_equal(ma, mb)
    assert gram(a[0][1]).shape[0] == a[0][0][1]
