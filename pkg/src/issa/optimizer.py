"""Outer optimization loop driven by the Neumann inverse-Hessian estimate.

Each iteration draws tau sample indices, refreshes the estimate R
(incrementally or by truncated rebuild), and steps
x <- x - (1/c) R grad F(x).  The step divisor c is either fixed
(default 1) or recomputed each iteration from the guaranteed-rate
formula, which depends on the accumulated sample count.  An online
variant replaces the full gradient with a growing mini-batch gradient
drawn from an independent stream.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .estimator import (
    DEFAULT_TRUNCATE_CAP,
    DivergenceError,
    init_state,
    practical_update,
    record_draw,
    theoretical_rebuild,
)
from .sampling import SamplingSpec, draw_tau, make_stream

VARIANTS = ("practical", "theoretical", "online")
STEP_MODES = ("theorem1", "fixed")


class StepSizeError(ValueError):
    """The rate-derived step formula is undefined for these inputs."""


def step_size_theorem1(alpha, beta, m):
    """Step divisor c from the guaranteed-rate analysis, at sample count m.

    c = [b(2-a)^2 + b(2-a)(1-a)^m] / [(1-a)^2 - (1-a)^{2m}].  Converges
    to c_inf = b(2-a)^2/(1-a)^2 as m grows.  Raises StepSizeError when
    the denominator is not positive (m < 2, or alpha = 1).
    """
    _check_ab(alpha, beta)
    if m < 1:
        raise StepSizeError("need at least one accumulated sample")
    q = 1.0 - alpha
    den = q**2 - q ** (2 * m)
    if den <= 0.0:
        raise StepSizeError(f"degenerate step denominator at alpha={alpha}, m={m}")
    num = beta * (2.0 - alpha) ** 2 + beta * (2.0 - alpha) * q**m
    return num / den


def step_size_c_inf(alpha, beta):
    """Large-m limit of the rate-derived step divisor."""
    _check_ab(alpha, beta)
    if alpha >= 1.0:
        raise StepSizeError("c_inf undefined at alpha = 1")
    return beta * (2.0 - alpha) ** 2 / (1.0 - alpha) ** 2


def _step_size_or_inf(alpha, beta, m):
    try:
        return step_size_theorem1(alpha, beta, m)
    except StepSizeError:
        return step_size_c_inf(alpha, beta)


def compute_mu(alpha, beta, m):
    """Guaranteed per-iteration contraction factor of the expected
    suboptimality: E[F(x+) - F*] <= (1 - mu) (F(x) - F*)."""
    _check_ab(alpha, beta)
    q = 1.0 - alpha
    return (q**4 * alpha) / (beta * (2.0 - alpha) ** 2 * ((2.0 - alpha) + alpha**2 * q**m))


def quad_regime_window(alpha, beta, m):
    """(lower, upper) gradient-norm window of the quadratic-decay regime."""
    _check_ab(alpha, beta)
    upper = alpha**2 / (8.0 * beta)
    lower = beta * (1.0 - alpha) ** m / 2.0 + alpha * beta * (beta - alpha) / 4.0
    return lower, upper


def quad_regime_check(grad_norm, alpha, beta, m):
    """True iff the gradient norm sits inside the quadratic-decay window."""
    lower, upper = quad_regime_window(alpha, beta, m)
    return lower <= grad_norm <= upper


def _check_ab(alpha, beta):
    if not 0.0 < alpha <= beta <= 1.0:
        raise ValueError(f"need 0 < alpha <= beta <= 1, got {alpha}, {beta}")


@dataclass
class TraceRow:
    """Per-iteration telemetry shared by all optimizers."""

    iter: int
    fx: float
    grad_norm: float
    subopt: float | None
    c_used: float
    estimator_steps: int
    grad_batch: int | None
    quad_regime: bool
    wall_ms: float
    hist_warn: bool = False
    unstable: bool = False


@dataclass
class RunConfig:
    """Full description of one optimizer run."""

    variant: str = "practical"
    tau: int = 5
    step_mode: str = "fixed"
    c_fixed: float = 1.0
    max_iters: int = 1000
    grad_tol: float = 1e-10
    seed: int = 0
    truncate_cap: int | None = DEFAULT_TRUNCATE_CAP
    grad_batch0: int | None = None
    grad_growth: float = 1.0
    grad_seed: int | None = None
    freeze_estimator: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.step_mode not in STEP_MODES:
            raise ValueError(f"unknown step mode {self.step_mode!r}")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")
        if self.c_fixed <= 0:
            raise ValueError("fixed step divisor must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        if self.grad_growth < 1.0:
            raise ValueError("gradient batch growth factor must be >= 1")
        if self.variant == "online":
            if self.grad_batch0 is None or self.grad_batch0 < 1:
                raise ValueError("online variant needs a positive initial batch size")
            if self.grad_seed is None:
                raise ValueError("online variant needs an independent gradient seed")
            if self.grad_seed == self.seed:
                # A shared sampling mechanism couples the two estimates
                # and destabilizes the iteration; reject outright.
                raise ValueError("gradient seed must differ from the Hessian seed")


def issa_step(obj, x, est, c):
    """One update x - (1/c) R grad F(x)."""
    if c <= 0:
        raise ValueError("step divisor must be positive")
    g = obj.full_gradient(x)
    return x - (est.R @ g) / c


def run(config, obj, x0=None, x_star=None):
    """Execute the optimizer loop; returns the list of TraceRows.

    Row 0 describes the starting point; row k the state after the k-th
    step, at which point the estimate has absorbed k*tau samples.
    Deterministic for a fixed config.
    """
    if config.variant == "online":
        return online_run(config, obj, x0, x_star)
    if config.variant == "practical" and not obj.hessian_constant:
        raise ValueError(
            "practical variant requires iterate-independent Hessian samples"
        )
    return _loop(config, obj, x0, x_star, grad_stream=None)


def online_run(config, obj, x0=None, x_star=None):
    """Mini-batch-gradient variant with a geometrically growing batch."""
    if config.variant != "online":
        raise ValueError("config.variant must be 'online'")
    grad_stream = make_stream(config.grad_seed)
    return _loop(config, obj, x0, x_star, grad_stream=grad_stream)


def _loop(config, obj, x0, x_star, grad_stream):
    n, d = obj.n, obj.d
    x = np.zeros(d) if x0 is None else np.asarray(x0, dtype=np.float64).copy()
    f_star = obj.value(x_star) if x_star is not None else None

    spec = SamplingSpec(n=n, tau=config.tau, seed=config.seed)
    rng = make_stream(config.seed)
    online = grad_stream is not None
    practical = config.variant == "practical" or (online and obj.hessian_constant)
    mode = "practical" if practical else "theoretical"
    est = init_state(d, mode=mode, truncate_cap=config.truncate_cap)

    batch = min(n, config.grad_batch0) if online else None

    rows = []
    t_prev = time.perf_counter()

    def emit(k, fx, gn, c_used, grad_batch, hist_warn, unstable):
        nonlocal t_prev
        now = time.perf_counter()
        row = TraceRow(
            iter=k,
            fx=fx,
            grad_norm=gn,
            subopt=None if f_star is None else fx - f_star,
            c_used=c_used,
            estimator_steps=est.steps,
            grad_batch=grad_batch,
            quad_regime=quad_regime_check(gn, obj.alpha, obj.beta, max(est.steps, 1)),
            wall_ms=(now - t_prev) * 1e3,
            hist_warn=hist_warn,
            unstable=unstable,
        )
        t_prev = now
        rows.append(row)

    g = _gradient(obj, x, online, batch, n, grad_stream)
    gn = float(np.linalg.norm(g))
    emit(0, obj.value(x), gn, math.nan, batch, False, False)

    increases = 0
    unstable = False
    fx_prev = rows[0].fx
    k = 0
    while gn > config.grad_tol and k < config.max_iters:
        k += 1
        draw = draw_tau(spec, rng)
        if config.freeze_estimator:
            record_draw(est, draw)
        elif practical:
            practical_update(est, draw, obj)
        else:
            record_draw(est, draw)
            theoretical_rebuild(est, x, obj)
        if config.step_mode == "theorem1":
            c = _step_size_or_inf(obj.alpha, obj.beta, est.steps)
        else:
            c = config.c_fixed
        x = x - (est.R @ g) / c

        hist_warn = False
        if online:
            hist_warn = est.steps > batch
            batch = min(n, math.ceil(config.grad_growth * batch))
        g = _gradient(obj, x, online, batch, n, grad_stream)
        gn = float(np.linalg.norm(g))
        fx = obj.value(x)
        if not math.isfinite(fx) or not math.isfinite(gn):
            err = DivergenceError(f"non-finite objective at iteration {k}")
            err.trace = rows
            raise err
        if fx > fx_prev:
            increases += 1
            if increases >= 5:
                unstable = True
        else:
            increases = 0
        fx_prev = fx
        emit(k, fx, gn, c, batch, hist_warn, unstable)
    return rows


def _gradient(obj, x, online, batch, n, grad_stream):
    if not online or batch >= n:
        return obj.full_gradient(x)
    bspec = SamplingSpec(n=n, tau=batch, seed=0)
    idx = draw_tau(bspec, grad_stream)
    return obj.batch_gradient(x, idx)
