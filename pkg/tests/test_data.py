import numpy as np
import pytest

from issa import data
from issa.objectives import scale_to_unit_hessian


def test_generate_synthetic_deterministic_and_truncated():
    spec = data.DatasetSpec(n=200, d=10, seed=5)
    a = data.generate_synthetic(spec)
    b = data.generate_synthetic(spec)
    np.testing.assert_array_equal(a.Z, b.Z)
    np.testing.assert_array_equal(a.y, b.y)
    assert np.abs(a.Z).max() <= spec.truncation


def test_dataset_spec_validation():
    with pytest.raises(ValueError):
        data.DatasetSpec(n=0, d=5, seed=0)
    with pytest.raises(ValueError):
        data.DatasetSpec(n=5, d=5, seed=0, truncation=0.0)


def test_ridge_with_alpha_hits_alpha_exactly():
    prob = data.ridge_with_alpha(100, 8, 0.37, seed=1)
    obj = scale_to_unit_hessian(prob)
    assert obj.alpha == pytest.approx(0.37, abs=1e-12)
    with pytest.raises(ValueError):
        data.ridge_with_alpha(10, 2, 1.0, seed=1)


def test_ridge_unscaled_spectrum():
    prob = data.ridge_unscaled(100, 10, 2.0, seed=3)
    H = prob.Z.T @ prob.Z / 100 + prob.lam * np.eye(10)
    assert np.linalg.eigvalsh(H).max() == pytest.approx(2.0, rel=1e-10)
    norms = np.einsum("ij,ij->i", prob.Z, prob.Z)
    assert norms.std() <= 1e-10 * norms.mean()
    with pytest.raises(ValueError):
        data.ridge_unscaled(10, 2, 0.01, seed=1, lam=0.05)


def test_random_spd_spectrum():
    M = data.random_spd(6, 0.2, 0.8, seed=4)
    ev = np.linalg.eigvalsh(M)
    np.testing.assert_allclose(ev, np.linspace(0.2, 0.8, 6), rtol=1e-10)
    with pytest.raises(ValueError):
        data.random_spd(4, 0.0, 1.0, seed=1)


def test_libsvm_roundtrip(tmp_path):
    prob = data.generate_synthetic(data.DatasetSpec(n=20, d=5, seed=6))
    path = tmp_path / "data.libsvm"
    data.write_libsvm(path, prob.Z, prob.y)
    Z, y = data.load_libsvm_raw(path)
    np.testing.assert_array_equal(Z, prob.Z)
    np.testing.assert_array_equal(y, prob.y)
    ridge = data.load_libsvm_ridge(path, lam=0.1)
    assert ridge.lam == 0.1
    logi = data.load_libsvm(path, lam=0.1)
    assert set(np.unique(logi.y)) <= {0.0, 1.0}


def test_libsvm_malformed_lines(tmp_path):
    p = tmp_path / "bad.libsvm"
    p.write_text("notanumber 1:2.0\n")
    with pytest.raises(data.LibsvmFormatError, match="line 1"):
        data.load_libsvm_raw(p)
    p.write_text("1.0 0:2.0\n")
    with pytest.raises(data.LibsvmFormatError, match="1-based"):
        data.load_libsvm_raw(p)
    p.write_text("1.0 1:abc\n")
    with pytest.raises(data.LibsvmFormatError, match="token"):
        data.load_libsvm_raw(p)
    p.write_text("# only a comment\n\n")
    with pytest.raises(data.LibsvmFormatError, match="empty"):
        data.load_libsvm_raw(p)


def test_libsvm_skips_comments_and_blank_lines(tmp_path):
    p = tmp_path / "ok.libsvm"
    p.write_text("# header\n\n1.0 1:0.5 3:0.25\n-1.0 2:1.5\n")
    Z, y = data.load_libsvm_raw(p)
    assert Z.shape == (2, 3)
    assert Z[0, 0] == 0.5 and Z[0, 2] == 0.25 and Z[1, 1] == 1.5
    np.testing.assert_array_equal(y, [1.0, -1.0])
