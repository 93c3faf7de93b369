"""Reference optimizers producing the shared trace schema.

Gradient descent, a sampled-inverse baseline that builds fixed-depth
Neumann directions in vector form (LISSA), limited-memory BFGS with the
two-loop recursion, and full dense BFGS.  All emit the same TraceRow
rows as the main optimizer so traces are directly comparable.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .estimator import DivergenceError
from .optimizer import TraceRow
from .sampling import make_stream

ARMIJO_C1 = 1e-4
ARMIJO_SHRINK = 0.5
ARMIJO_MAX_HALVINGS = 30


@dataclass(frozen=True)
class LissaConfig:
    """Estimator-averaging parameters: s1 repetitions of depth-s2 builds."""

    s1: int
    s2: int
    step: float = 1.0

    def __post_init__(self):
        if self.s1 < 1:
            raise ValueError("s1 must be >= 1")
        if self.s2 < 0:
            raise ValueError("s2 must be >= 0")
        if self.step <= 0:
            raise ValueError("step must be positive")


def _row(k, fx, gn, f_star, c_used, samples, t_prev):
    now = time.perf_counter()
    row = TraceRow(
        iter=k,
        fx=fx,
        grad_norm=gn,
        subopt=None if f_star is None else fx - f_star,
        c_used=c_used,
        estimator_steps=samples,
        grad_batch=None,
        quad_regime=False,
        wall_ms=(now - t_prev) * 1e3,
    )
    return row, now


def _check_finite(fx, k):
    if not math.isfinite(fx):
        raise DivergenceError(f"non-finite objective at iteration {k}")


def gd_run(obj, x0=None, step=1.0, iters=1000, grad_tol=1e-10, x_star=None):
    """Plain gradient descent; step 1 is safe once beta <= 1."""
    if step <= 0:
        raise ValueError("step must be positive")
    x = np.zeros(obj.d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    f_star = obj.value(x_star) if x_star is not None else None
    rows = []
    t_prev = time.perf_counter()
    g = obj.full_gradient(x)
    gn = float(np.linalg.norm(g))
    row, t_prev = _row(0, obj.value(x), gn, f_star, math.nan, 0, t_prev)
    rows.append(row)
    for k in range(1, iters + 1):
        if gn <= grad_tol:
            break
        x = x - step * g
        g = obj.full_gradient(x)
        gn = float(np.linalg.norm(g))
        fx = obj.value(x)
        _check_finite(fx, k)
        row, t_prev = _row(k, fx, gn, f_star, step, 0, t_prev)
        rows.append(row)
    return rows


def _lissa_direction(obj, x, g, s2, rng):
    # Depth-s2 Neumann direction in vector form: u <- g + (I - X_j) u,
    # starting from u = g, over s2 samples drawn with replacement.
    idx = rng.integers(0, obj.n, size=s2)
    u = g.copy()
    if s2 == 0:
        return u
    Zb = obj.problem.Z[idx]
    w = obj.sample_weights(idx, x)
    decay = 1.0 - obj.lam_s
    for j in range(s2):
        z = Zb[j]
        u = g + decay * u - (w[j] * obj.inv_s) * z * (z @ u)
    return u


def lissa_run(obj, x0=None, cfg=LissaConfig(1, 20), iters=1000, seed=0,
              grad_tol=1e-10, x_star=None):
    """Fixed-depth sampled-Neumann directions, averaged over s1 builds."""
    x = np.zeros(obj.d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    f_star = obj.value(x_star) if x_star is not None else None
    rng = make_stream(seed)
    rows = []
    t_prev = time.perf_counter()
    g = obj.full_gradient(x)
    gn = float(np.linalg.norm(g))
    row, t_prev = _row(0, obj.value(x), gn, f_star, math.nan, 0, t_prev)
    rows.append(row)
    samples = 0
    for k in range(1, iters + 1):
        if gn <= grad_tol:
            break
        direction = np.zeros(obj.d)
        for _ in range(cfg.s1):
            direction += _lissa_direction(obj, x, g, cfg.s2, rng)
        direction /= cfg.s1
        samples += cfg.s1 * cfg.s2
        x = x - cfg.step * direction
        g = obj.full_gradient(x)
        gn = float(np.linalg.norm(g))
        fx = obj.value(x)
        _check_finite(fx, k)
        row, t_prev = _row(k, fx, gn, f_star, cfg.step, samples, t_prev)
        rows.append(row)
    return rows


def _armijo(obj, x, f, g, p):
    # Backtracking from unit step until sufficient decrease; returns
    # (step, new_x, new_f) or None when 30 halvings fail.
    gp = g @ p
    t = 1.0
    for _ in range(ARMIJO_MAX_HALVINGS + 1):
        x_new = x + t * p
        f_new = obj.value(x_new)
        if f_new <= f + ARMIJO_C1 * t * gp:
            return t, x_new, f_new
        t *= ARMIJO_SHRINK
    return None


def _two_loop(g, s_list, y_list, rho_list):
    q = g.copy()
    alphas = []
    for s, y, rho in zip(reversed(s_list), reversed(y_list), reversed(rho_list)):
        a = rho * (s @ q)
        alphas.append(a)
        q -= a * y
    s, y = s_list[-1], y_list[-1]
    gamma = (s @ y) / (y @ y)
    r = gamma * q
    for (s, y, rho), a in zip(zip(s_list, y_list, rho_list), reversed(alphas)):
        b = rho * (y @ r)
        r += (a - b) * s
    return r


def lbfgs_run(obj, x0=None, mem=5, iters=1000, grad_tol=1e-10, x_star=None):
    """Limited-memory BFGS with two-loop recursion and Armijo backtracking."""
    if mem < 1:
        raise ValueError("memory must be >= 1")
    x = np.zeros(obj.d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    f_star = obj.value(x_star) if x_star is not None else None
    rows = []
    t_prev = time.perf_counter()
    f = obj.value(x)
    g = obj.full_gradient(x)
    gn = float(np.linalg.norm(g))
    row, t_prev = _row(0, f, gn, f_star, math.nan, 0, t_prev)
    rows.append(row)
    s_list, y_list, rho_list = [], [], []
    for k in range(1, iters + 1):
        if gn <= grad_tol:
            break
        if s_list:
            p = -_two_loop(g, s_list, y_list, rho_list)
            if g @ p >= 0:
                p = -g
        else:
            p = -g
        hit = _armijo(obj, x, f, g, p)
        if hit is None:
            # Even the gradient direction failed to decrease; stop.
            break
        t, x_new, f_new = hit
        g_new = obj.full_gradient(x_new)
        s = x_new - x
        y = g_new - g
        sy = s @ y
        if sy > 1e-14 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            s_list.append(s)
            y_list.append(y)
            rho_list.append(1.0 / sy)
            if len(s_list) > mem:
                s_list.pop(0)
                y_list.pop(0)
                rho_list.pop(0)
        x, f, g = x_new, f_new, g_new
        gn = float(np.linalg.norm(g))
        _check_finite(f, k)
        row, t_prev = _row(k, f, gn, f_star, t, 0, t_prev)
        rows.append(row)
    return rows


def bfgs_run(obj, x0=None, iters=1000, grad_tol=1e-10, x_star=None):
    """Dense inverse-Hessian BFGS with the same line search as lbfgs_run."""
    x = np.zeros(obj.d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    f_star = obj.value(x_star) if x_star is not None else None
    H = np.eye(obj.d)
    rows = []
    t_prev = time.perf_counter()
    f = obj.value(x)
    g = obj.full_gradient(x)
    gn = float(np.linalg.norm(g))
    row, t_prev = _row(0, f, gn, f_star, math.nan, 0, t_prev)
    rows.append(row)
    first = True
    for k in range(1, iters + 1):
        if gn <= grad_tol:
            break
        p = -(H @ g)
        if g @ p >= 0:
            p = -g
        hit = _armijo(obj, x, f, g, p)
        if hit is None:
            break
        t, x_new, f_new = hit
        g_new = obj.full_gradient(x_new)
        s = x_new - x
        y = g_new - g
        sy = s @ y
        if sy > 1e-14 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            if first:
                # Scale the initial matrix before the first update.
                H *= sy / (y @ y)
                first = False
            rho = 1.0 / sy
            Hy = H @ y
            H -= rho * (np.outer(s, Hy) + np.outer(Hy, s))
            H += rho * (rho * (y @ Hy) + 1.0) * np.outer(s, s)
        x, f, g = x_new, f_new, g_new
        gn = float(np.linalg.norm(g))
        _check_finite(f, k)
        row, t_prev = _row(k, f, gn, f_star, t, 0, t_prev)
        rows.append(row)
    return rows
