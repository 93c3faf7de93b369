import numpy as np
import pytest

from issa import optimizer
from issa.data import DatasetSpec, generate_synthetic
from issa.estimator import init_state
from issa.objectives import RidgeProblem, scale_to_unit_hessian
from issa.optimizer import RunConfig, StepSizeError, run
from issa.traces import rows_equal


def test_step_size_theorem1_values():
    assert optimizer.step_size_theorem1(0.5, 1.0, 2) == pytest.approx(14.0)
    assert optimizer.step_size_c_inf(0.5, 1.0) == pytest.approx(9.0)
    # Large m converges to the limit.
    assert optimizer.step_size_theorem1(0.5, 1.0, 200) == pytest.approx(9.0)


def test_step_size_degenerate_cases():
    with pytest.raises(StepSizeError):
        optimizer.step_size_theorem1(1.0, 1.0, 10)
    with pytest.raises(StepSizeError):
        optimizer.step_size_theorem1(0.5, 1.0, 0)
    with pytest.raises(StepSizeError):
        optimizer.step_size_c_inf(1.0, 1.0)
    # Fallback path returns the limit instead of raising.
    assert optimizer._step_size_or_inf(1.0 - 1e-16, 1.0, 5) == pytest.approx(
        optimizer.step_size_c_inf(1.0 - 1e-16, 1.0)
    )
    with pytest.raises(ValueError):
        optimizer.step_size_theorem1(0.5, 0.4, 5)


def test_compute_mu_value_and_gd_comparison():
    assert optimizer.compute_mu(0.5, 1.0, 10**6) == pytest.approx(
        0.0625 * 0.5 / (2.25 * 1.5), rel=1e-9
    )
    # The guaranteed rate is always worse than plain gradient descent's
    # alpha/beta, by a wide margin.
    for alpha in (0.1, 0.3, 0.5, 0.8):
        for beta in (alpha, min(1.0, 2 * alpha), 1.0):
            if beta < alpha:
                continue
            for m in (2, 10, 100):
                assert optimizer.compute_mu(alpha, beta, m) < alpha / beta / 8


def test_quad_regime_window_examples():
    lo, hi = optimizer.quad_regime_window(0.9, 1.0, 500)
    assert hi == pytest.approx(0.10125)
    assert lo == pytest.approx(0.9 * 1.0 * 0.1 / 4, rel=1e-6)
    assert optimizer.quad_regime_check(0.05, 0.9, 1.0, 500)
    assert not optimizer.quad_regime_check(0.001, 0.9, 1.0, 500)
    # alpha == beta kills the floor term.
    lo_eq, hi_eq = optimizer.quad_regime_window(0.9, 0.9, 30)
    assert lo_eq == pytest.approx(0.9 * 0.1**30 / 2)
    assert hi_eq == pytest.approx(0.81 / 7.2)


def test_issa_step_stationary_and_newton():
    # d=1 quadratic with exact inverse in R: one step solves it.
    prob = RidgeProblem(Z=np.array([[1.0]]), y=np.array([0.7]), lam=0.3)
    obj = scale_to_unit_hessian(prob)
    est = init_state(1)
    est.R = np.linalg.inv(obj.full_hessian())
    x1 = optimizer.issa_step(obj, np.array([5.0]), est, 1.0)
    assert abs(obj.full_gradient(x1)[0]) < 1e-12
    x2 = optimizer.issa_step(obj, x1, est, 1.0)
    np.testing.assert_allclose(x2, x1)
    with pytest.raises(ValueError):
        optimizer.issa_step(obj, x1, est, 0.0)


def test_scalar_quadratic_converges():
    prob = RidgeProblem(Z=np.array([[1.0]]), y=np.array([2.0]), lam=0.5)
    obj = scale_to_unit_hessian(prob)
    x_star = np.array([2.0 / 1.5])
    rows = run(RunConfig(tau=1, max_iters=400, seed=1), obj, x_star=x_star)
    assert rows[-1].subopt <= 1e-12


def test_run_is_deterministic():
    obj = scale_to_unit_hessian(
        generate_synthetic(DatasetSpec(n=80, d=8, seed=2, lam=0.05))
    )
    cfg = RunConfig(tau=4, max_iters=40, seed=9)
    a = run(cfg, obj)
    b = run(cfg, obj)
    assert len(a) == len(b)
    assert all(rows_equal(x, y, ignore_wall=True) for x, y in zip(a, b))


def test_freeze_estimator_equals_gradient_descent():
    from issa.baselines import gd_run

    obj = scale_to_unit_hessian(
        generate_synthetic(DatasetSpec(n=60, d=5, seed=3, lam=0.05))
    )
    frozen = run(RunConfig(tau=3, max_iters=30, seed=4, freeze_estimator=True), obj)
    gd = gd_run(obj, step=1.0, iters=30)
    assert len(frozen) == len(gd)
    for a, b in zip(frozen, gd):
        assert a.fx == b.fx
        assert a.grad_norm == b.grad_norm


def test_gradient_norm_decreases_after_warmup():
    # Empirical property: with tau=5 and unit step the trajectory is
    # monotone once the estimate has absorbed a few draws.
    obj = scale_to_unit_hessian(
        generate_synthetic(DatasetSpec(n=200, d=20, seed=5, lam=0.05))
    )
    for seed in range(10):
        rows = run(RunConfig(tau=5, max_iters=25, seed=seed), obj)
        gns = [r.grad_norm for r in rows[3:]]
        assert all(a >= b for a, b in zip(gns, gns[1:]))


def test_theorem1_step_mode_uses_formula():
    obj = scale_to_unit_hessian(
        generate_synthetic(DatasetSpec(n=80, d=8, seed=6, lam=0.05))
    )
    rows = run(RunConfig(tau=4, step_mode="theorem1", max_iters=5, seed=7), obj)
    for k, row in enumerate(rows[1:], start=1):
        expected = optimizer._step_size_or_inf(obj.alpha, obj.beta, 4 * k)
        assert row.c_used == pytest.approx(expected)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(variant="nope")
    with pytest.raises(ValueError):
        RunConfig(step_mode="adaptive")
    with pytest.raises(ValueError):
        RunConfig(tau=0)
    with pytest.raises(ValueError):
        RunConfig(c_fixed=0.0)
    with pytest.raises(ValueError):
        RunConfig(grad_growth=0.5)
    with pytest.raises(ValueError):
        RunConfig(variant="online", grad_batch0=None, grad_seed=1)
    with pytest.raises(ValueError):
        RunConfig(variant="online", grad_batch0=16, grad_seed=None)
    with pytest.raises(ValueError):
        RunConfig(variant="online", grad_batch0=16, seed=3, grad_seed=3)


def test_practical_variant_rejects_logistic(small_logistic):
    with pytest.raises(ValueError):
        run(RunConfig(variant="practical", max_iters=2), small_logistic)


def test_theoretical_variant_on_logistic(small_logistic):
    rows = run(
        RunConfig(variant="theoretical", tau=3, truncate_cap=50, max_iters=60,
                  grad_tol=1e-8, seed=8),
        small_logistic,
    )
    assert rows[-1].grad_norm <= 1e-6
