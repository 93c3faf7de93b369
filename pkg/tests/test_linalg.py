import numpy as np
import pytest

from issa import linalg
from issa.data import random_spd


def test_spectral_norm_diag():
    M = np.diag([0.2, 0.5, 0.9])
    est = linalg.spectral_norm_ub(M)
    assert est == pytest.approx(0.9 * linalg.SAFETY, rel=1e-9)
    assert est >= 0.9


def test_spectral_norm_matches_eigh():
    M = random_spd(10, 0.1, 0.8, seed=3)
    true = np.linalg.eigvalsh(M).max()
    est = linalg.spectral_norm_ub(M)
    assert est / linalg.SAFETY == pytest.approx(true, rel=1e-8)
    assert est >= true


def test_min_eig_lb_matches_eigh():
    M = random_spd(8, 0.15, 0.9, seed=5)
    true = np.linalg.eigvalsh(M).min()
    lb = linalg.min_eig_lb(M)
    assert lb <= true
    assert lb == pytest.approx(true, rel=0.05)


def test_power_iteration_error_carries_estimate():
    # Two leading eigenvalues closer than the tolerance resolves in two
    # iterations; the partial estimate must still be in the right range.
    M = np.diag([1.0, 1.0 - 1e-14, 0.1])
    with pytest.raises(linalg.PowerIterationError) as exc:
        linalg.spectral_norm_ub(M, iters=2, tol=1e-16)
    assert 0.1 < exc.value.last_estimate <= 1.0 + 1e-12


def test_rejects_nonsymmetric():
    M = np.array([[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(ValueError):
        linalg.spectral_norm_ub(M)


def test_rejects_nonsquare_and_nonfinite():
    with pytest.raises(ValueError):
        linalg.check_square(np.ones((2, 3)))
    with pytest.raises(ValueError):
        linalg.check_square(np.array([[1.0, np.nan], [np.nan, 1.0]]))


def test_matvec_shape_check():
    M = np.eye(3)
    with pytest.raises(ValueError):
        linalg.matvec(M, np.ones(4))
    np.testing.assert_allclose(linalg.matvec(M, np.arange(3.0)), np.arange(3.0))


def test_solve_spd_roundtrip():
    M = random_spd(12, 0.2, 1.0, seed=9)
    b = np.linspace(-1, 1, 12)
    v = linalg.solve_spd(M, b)
    assert np.linalg.norm(M @ v - b) <= 1e-10 * np.linalg.norm(b)


def test_solve_spd_rejects_indefinite():
    M = np.diag([1.0, -1.0])
    with pytest.raises(linalg.NotSPDError):
        linalg.solve_spd(M, np.ones(2))
