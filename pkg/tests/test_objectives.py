import numpy as np
import pytest

from issa.objectives import (
    LogisticProblem,
    RidgeProblem,
    scale_to_unit_hessian,
)
from issa.sampling import make_stream

from conftest import numeric_gradient


def test_ridge_gradient_matches_finite_difference(small_ridge):
    rng = make_stream(1)
    x = rng.standard_normal(small_ridge.d)
    g = small_ridge.full_gradient(x)
    g_num = numeric_gradient(small_ridge.value, x)
    np.testing.assert_allclose(g, g_num, rtol=1e-6, atol=1e-8)


def test_logistic_gradient_matches_finite_difference(small_logistic):
    rng = make_stream(2)
    x = 0.5 * rng.standard_normal(small_logistic.d)
    g = small_logistic.full_gradient(x)
    g_num = numeric_gradient(small_logistic.value, x)
    np.testing.assert_allclose(g, g_num, rtol=1e-5, atol=1e-8)


@pytest.mark.parametrize("fixture", ["small_ridge", "small_logistic"])
def test_sample_mean_equals_full_hessian(fixture, request):
    obj = request.getfixturevalue(fixture)
    rng = make_stream(3)
    x = rng.standard_normal(obj.d)
    mean = np.zeros((obj.d, obj.d))
    for i in range(obj.n):
        mean += obj.hessian_sample(i, x)
    mean /= obj.n
    np.testing.assert_allclose(mean, obj.full_hessian(x), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("fixture", ["small_ridge", "small_logistic"])
def test_samples_below_identity_after_scaling(fixture, request):
    obj = request.getfixturevalue(fixture)
    rng = make_stream(4)
    x = rng.standard_normal(obj.d)
    for i in range(obj.n):
        X = obj.hessian_sample(i, x)
        ev = np.linalg.eigvalsh((X + X.T) / 2)
        assert ev.max() <= 1.0 + 1e-12
        assert ev.min() >= obj.alpha - 1e-12


def test_scaling_constants(small_ridge, small_logistic):
    for obj in (small_ridge, small_logistic):
        assert obj.alpha == pytest.approx(obj.problem.lam / obj.s)
        assert 0 < obj.alpha <= obj.beta <= 1.0
    assert small_ridge.hessian_constant
    assert not small_logistic.hessian_constant


def test_batch_gradient_full_batch_equals_full(small_ridge):
    rng = make_stream(5)
    x = rng.standard_normal(small_ridge.d)
    g = small_ridge.batch_gradient(x, np.arange(small_ridge.n))
    np.testing.assert_allclose(g, small_ridge.full_gradient(x), rtol=1e-12)


def test_batch_gradient_validation(small_ridge):
    x = np.zeros(small_ridge.d)
    with pytest.raises(ValueError):
        small_ridge.batch_gradient(x, np.array([], dtype=np.int64))
    with pytest.raises(IndexError):
        small_ridge.batch_gradient(x, np.array([small_ridge.n]))


def test_logistic_stable_at_extreme_arguments(small_logistic):
    x = 1000.0 * np.ones(small_logistic.d)
    assert np.isfinite(small_logistic.value(x))
    assert np.all(np.isfinite(small_logistic.full_gradient(x)))


def test_logistic_label_mapping():
    Z = np.eye(3)
    prob = LogisticProblem(Z=Z, y=np.array([-1.0, 0.0, 2.0]), lam=0.1)
    np.testing.assert_array_equal(prob.y, [0.0, 0.0, 1.0])


def test_problem_validation():
    with pytest.raises(ValueError):
        RidgeProblem(Z=np.ones((3, 2)), y=np.ones(2), lam=0.1)
    with pytest.raises(ValueError):
        RidgeProblem(Z=np.ones((3, 2)), y=np.ones(3), lam=0.0)
    with pytest.raises(ValueError):
        RidgeProblem(Z=np.full((2, 2), np.inf), y=np.ones(2), lam=0.1)
    with pytest.raises(TypeError):
        scale_to_unit_hessian(object())


def test_s_override(small_ridge):
    obj = scale_to_unit_hessian(small_ridge.problem, s_override=123.0)
    assert obj.s == 123.0
    assert obj.alpha == pytest.approx(small_ridge.problem.lam / 123.0)
