import warnings

import numpy as np
import pytest

from antiwishart.config import matrix_scale
from antiwishart.ensemble import EnsembleSpec, sample_gaussian, sample_wishart
from antiwishart.errors import (
    IllConditionedWarning,
    NotSelfAdjointError,
    RegimeError,
    SingularMinorError,
)
from antiwishart.matrix_core import gram
from antiwishart.reconstruction import (
    PartialWishart,
    consistency_check,
    constraint_count,
    reconstruct,
)


def _erase_and_rebuild(omega, n, field=None):
    return reconstruct(PartialWishart.from_matrix(omega, n, field))


def test_rank_one_real():
    out = reconstruct(PartialWishart(np.array([[1.0, 2.0]])))
    np.testing.assert_array_equal(out, [[1, 2], [2, 4]])


def test_rank_one_complex_closure():
    row = np.array([[2, 1 + 1j, 3]], dtype=complex)
    out = reconstruct(PartialWishart(row))
    assert out[1, 1] == pytest.approx(1.0)
    assert out[1, 2] == pytest.approx((1 - 1j) * 3 / 2)
    assert out[2, 2] == pytest.approx(4.5)
    # the same matrix is the Gram matrix of the single row A = row / sqrt(w11)
    np.testing.assert_allclose(out, gram(row / np.sqrt(2)), atol=1e-15)


def test_partial_closure_layout():
    om = sample_wishart(EnsembleSpec(2, 5, "complex", 3))
    p = PartialWishart.from_matrix(om, 2)
    assert (p.n, p.k) == (2, 5)
    np.testing.assert_array_equal(p.closure[:2], om[:2])
    np.testing.assert_allclose(p.closure[2:, :2], om[2:, :2])
    assert np.isnan(p.closure[2:, 2:]).all()


def test_round_trip_3x6(rng):
    a = (rng.standard_normal((3, 6)) + 1j * rng.standard_normal((3, 6))) * np.sqrt(0.5)
    om = gram(a)
    out = _erase_and_rebuild(om, 3)
    assert np.abs(out - om).max() < 1e-10 * matrix_scale(om)
    np.testing.assert_array_equal(out[:3], om[:3])
    assert np.array_equal(out, out.conj().T)


@pytest.mark.parametrize("field", ["complex", "real"])
@pytest.mark.parametrize("n,k", [(1, 2), (2, 7), (4, 9), (6, 13), (8, 16)])
def test_round_trip_sweep(n, k, field):
    for t in range(20):
        om = sample_wishart(EnsembleSpec(n, k, field, seed=5), t)
        out = _erase_and_rebuild(om, n, field)
        assert np.abs(out - om).max() < 1e-9 * matrix_scale(om)
        assert out.dtype == om.dtype


def test_round_trip_deterministic_entries():
    """No randomness involved: integer and Vandermonde A."""
    i, j = np.meshgrid(np.arange(1, 3), np.arange(1, 7), indexing="ij")
    a = (i + 2 * j).astype(float)  # rank 2, so n = 2
    om = gram(a)
    assert np.abs(_erase_and_rebuild(om, 2) - om).max() < 1e-9 * matrix_scale(om)
    a = np.vander(np.arange(1.0, 4.0), 6, increasing=True)
    om = gram(a)
    assert np.abs(_erase_and_rebuild(om, 3) - om).max() < 1e-9 * matrix_scale(om)


def test_reconstruct_is_fixed_point_of_check():
    for t in range(10):
        om = sample_wishart(EnsembleSpec(3, 8, "complex", 9), t)
        out = _erase_and_rebuild(om, 3)
        assert consistency_check(out, 3).max_abs < 1e-10 * matrix_scale(out)


def test_reconstruct_errors():
    with pytest.raises(RegimeError):
        PartialWishart(np.eye(3))
    with pytest.raises(RegimeError):
        PartialWishart(np.ones((4, 3)))
    with pytest.raises(SingularMinorError):
        reconstruct(PartialWishart(np.array([[0.0, 1.0, 2.0]])))
    with pytest.raises(NotSelfAdjointError):
        PartialWishart(np.array([[1.0, 2.0, 0.0], [3.0, 1.0, 0.0]]))


def test_ill_conditioned_warning():
    rows = np.array([[1.0, 0.0, 1.0], [0.0, 1e-14, 1e-14]])
    with pytest.warns(IllConditionedWarning):
        out = reconstruct(PartialWishart(rows), pivot_tol=1e-20)
    # 1 * 1 * 1 + 1e-14 * 1e14 * 1e-14
    assert out[2, 2] == pytest.approx(1.0 + 1e-14, abs=1e-15)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        reconstruct(PartialWishart(np.array([[1.0, 2.0]])))


def test_consistency_check_on_gram(rng):
    a = (rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5))) * np.sqrt(0.5)
    om = gram(a)
    rep = consistency_check(om, 2)
    assert rep.residuals.shape == (3, 3)
    assert rep.max_abs < 1e-10 * matrix_scale(om)
    assert rep.constraint_count == 9


def test_consistency_check_perturbed_corner(rng):
    a = (rng.standard_normal((2, 5)) + 1j * rng.standard_normal((2, 5))) * np.sqrt(0.5)
    om = gram(a)
    om[3, 3] += 1.0
    res = consistency_check(om, 2).residuals
    assert res[1, 1] == pytest.approx(1.0, abs=1e-12)
    # w44 only enters the bordered matrix whose corner it is
    others = np.delete(res.ravel(), 4)
    assert np.abs(others).max() < 1e-12


def test_residual_is_affine_with_unit_slope():
    om = sample_wishart(EnsembleSpec(2, 5, "complex", 1))
    base = consistency_check(om, 2).residuals
    for l in range(3, 6):
        for m in range(3, 6):
            for delta in (0.5, -2.0 + 1j, 1e-3j):
                bumped = om.copy()
                bumped[l - 1, m - 1] += delta
                res = consistency_check(bumped, 2).residuals
                assert res[l - 3, m - 3] - base[l - 3, m - 3] == pytest.approx(delta, abs=1e-12)


def test_consistency_check_real_counts_upper_only():
    om = sample_wishart(EnsembleSpec(1, 4, "real", 2))
    rep = consistency_check(om, 1)
    assert rep.constraint_count == 6
    assert rep.residuals.dtype == np.float64
    assert np.array_equal(rep.residuals, rep.residuals.T)


def test_consistency_check_regime():
    with pytest.raises(RegimeError):
        consistency_check(np.eye(3), 3)
    with pytest.raises(RegimeError):
        consistency_check(np.eye(3), 4)


def test_constraint_count():
    assert constraint_count(1, 3, "complex") == 4
    assert constraint_count(1, 3, "real") == 3
    assert constraint_count(2, 3, "complex") == constraint_count(2, 3, "real") == 1
    for n, k in [(1, 5), (3, 8), (2, 10)]:
        assert constraint_count(n, k, "complex") == (k - n) ** 2
        assert constraint_count(n, k, "real") == (k - n) * (k - n + 1) // 2
    with pytest.raises(RegimeError):
        constraint_count(3, 3, "real")


def test_sampled_anti_wishart_satisfies_constraints():
    for n, k in [(1, 3), (2, 5), (3, 6), (4, 9)]:
        for t in range(25):
            a = sample_gaussian(EnsembleSpec(n, k, "complex", 21), t)
            om = gram(a)
            assert consistency_check(om, n).max_abs < 1e-9 * matrix_scale(om)
