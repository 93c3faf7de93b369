"""Executable checks of the estimator moment bounds and convergence rates.

Each check turns an in-expectation statement into a testable assertion:
deterministic statements are evaluated exactly, stochastic ones by
Monte Carlo with a normal-approximation standard error and a fixed
sigma slack (3 sigma for moment bounds, 4 sigma for contractions).
Trials use per-trial substreams derived from (seed, trial), so results
do not depend on scheduling.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .estimator import approx_error_bound, expected_estimator
from .kernels import mc_fold_rank1
from .optimizer import (
    compute_mu,
    quad_regime_window,
    _step_size_or_inf,
)
from .sampling import SamplingSpec, draw_tau, make_stream

MIN_TRIALS = 100


@dataclass
class MomentReport:
    """Monte Carlo (or exact) estimate of an estimator moment vs its bound."""

    quantity: str
    empirical: float
    stderr: float
    bound: float
    trials: int
    m: int
    alpha: float
    passed: bool


@dataclass
class StepReport:
    """One per-step margin of a contraction or regime check."""

    k: int
    m: int
    lhs: float
    rhs: float
    stderr: float
    passed: bool


def first_moment_spectrum_cap(alpha, margin=0.9):
    """Largest top eigenvalue for which the first-moment bound can hold.

    The first-moment quantity is controlled by the top of H's spectrum
    while the bound depends only on alpha; comparing the two geometric
    sums shows the bound requires roughly
    beta <= (2 alpha - alpha^2) / (1 - alpha)^2.  ``margin`` keeps
    finite-m headroom; the result is capped at 1 and floored at alpha.
    """
    cap = (2.0 * alpha - alpha**2) / (1.0 - alpha) ** 2
    return max(alpha, min(1.0, margin * cap))


def first_moment_bound(alpha, m):
    """Upper bound on lambda_max(-E[R^m]):
    -(1-a)^2 (1 - (1-a)^{2m-2}) / (2a - a^2)."""
    q = 1.0 - alpha
    return -(q**2) * (1.0 - q ** (2 * m - 2)) / (2.0 * alpha - alpha**2)


def second_moment_bound(alpha, m):
    """Upper bound on lambda_max(E[R^m' R^m]): (2-a)/a^2 + (1-a)^m."""
    return (2.0 - alpha) / alpha**2 + (1.0 - alpha) ** m


def check_first_moment(H, m, alpha):
    """Deterministic first-moment check on the expected estimator."""
    E = expected_estimator(H, m)
    lhs = float(np.linalg.eigvalsh(-(E + E.T) / 2.0).max())
    bound = first_moment_bound(alpha, m)
    return MomentReport(
        quantity="first_moment_lambda_max",
        empirical=lhs,
        stderr=0.0,
        bound=bound,
        trials=0,
        m=m,
        alpha=alpha,
        passed=lhs <= bound,
    )


def _sample_builds(obj, m, trials, seed, tau=None):
    # Draw all sample indices up front, then build every trial's R.
    # Within one trial, indices come from repeated ordered draws of
    # size tau (default m, one draw per build).
    tau = m if tau is None else tau
    n = obj.n
    rng = make_stream(seed)
    idx = np.empty((trials, m), dtype=np.int64)
    spec = SamplingSpec(n=n, tau=tau, seed=seed)
    for t in range(trials):
        got = 0
        while got < m:
            take = min(tau, m - got)
            idx[t, got : got + take] = draw_tau(spec, rng)[:take]
            got += take
    Zt = obj.problem.Z[idx]
    if obj.kind == "ridge":
        Wt = np.ones((trials, m))
    else:
        raise ValueError("Monte Carlo builds support constant-Hessian objectives")
    return mc_fold_rank1(Zt, Wt, obj.lam_s, obj.inv_s)


def check_second_moment(obj, m, trials, seed):
    """Monte Carlo second-moment check: lambda_max of the mean of R'R
    against (2-a)/a^2 + (1-a)^m, with 3 sigma slack."""
    if trials < MIN_TRIALS:
        raise ValueError(f"need at least {MIN_TRIALS} trials for a usable stderr")
    R = _sample_builds(obj, m, trials, seed)
    G = np.einsum("tij,tik->tjk", R, R)
    mean_G = G.mean(axis=0)
    lam, vecs = np.linalg.eigh(mean_G)
    top = float(lam[-1])
    v = vecs[:, -1]
    # stderr of the Rayleigh quotient of the mean matrix at its top
    # eigenvector; first-order delta method.
    quad = np.einsum("j,tjk,k->t", v, G, v)
    stderr = float(quad.std(ddof=1) / math.sqrt(trials))
    bound = second_moment_bound(obj.alpha, m)
    return MomentReport(
        quantity="second_moment_lambda_max",
        empirical=top,
        stderr=stderr,
        bound=bound,
        trials=trials,
        m=m,
        alpha=obj.alpha,
        passed=top <= bound + 3.0 * stderr,
    )


def subopt_bound(grad_norm, alpha):
    """Suboptimality cap from strong convexity: |g|^2 / (2 alpha)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return grad_norm**2 / (2.0 * alpha)


def check_contraction(obj, x0, tau, steps, trials, seed):
    """Per-step verification of the expected-decrease guarantee.

    Follows one nominal trajectory with the rate-derived step divisor.
    At each iterate x^k, the whole k*tau-sample estimator build plus one
    step is re-sampled ``trials`` times; the mean decrease must reach
    mu * (F(x^k) - F*) minus 4 standard errors.
    """
    if obj.kind != "ridge":
        raise ValueError("contraction check needs a quadratic objective")
    H = obj.full_hessian()
    b = obj.problem.Z.T @ obj.problem.y / obj.n / obj.s
    x_star = linalg.solve_spd(H, b)
    f_star = obj.value(x_star)

    x = np.asarray(x0, dtype=np.float64).copy()
    reports = []
    for k in range(1, steps + 1):
        m = k * tau
        c = _step_size_or_inf(obj.alpha, obj.beta, m)
        mu = compute_mu(obj.alpha, obj.beta, m)
        g = obj.full_gradient(x)
        fx = obj.value(x)
        R = _sample_builds(obj, m, trials, seed + 1000 + k, tau=tau)
        x_next = x[None, :] - np.einsum("tij,j->ti", R, g) / c
        r = x_next @ obj.problem.Z.T - obj.problem.y[None, :]
        f_next = (
            0.5 * np.einsum("ti,ti->t", r, r) / obj.n
            + 0.5 * obj.problem.lam * np.einsum("ti,ti->t", x_next, x_next)
        ) / obj.s
        decrease = fx - f_next
        mean_dec = float(decrease.mean())
        stderr = float(decrease.std(ddof=1) / math.sqrt(trials))
        rhs = mu * (fx - f_star)
        reports.append(
            StepReport(
                k=k,
                m=m,
                lhs=mean_dec,
                rhs=rhs,
                stderr=stderr,
                passed=mean_dec >= rhs - 4.0 * stderr,
            )
        )
        # Advance the nominal trajectory by one freshly sampled step.
        Rnom = _sample_builds(obj, m, 1, seed + 2000 + k, tau=tau)[0]
        x = x - (Rnom @ g) / c
    return reports


def check_quadratic_regime(obj, x0, tau, trials, seed, steps=1):
    """Verify the quadratic gradient-decay guarantee while the
    gradient-norm window condition holds.

    Builds a fresh tau*k-sample estimator per trial, takes one unit step
    (c = 1) and checks E|g(x+)| <= 4 (beta/alpha^2) |g(x)|^2 + 4 sigma.
    Returns the per-step reports plus the window at each step; stops
    once the nominal gradient leaves the window.
    """
    if obj.kind != "ridge":
        raise ValueError("regime check needs a quadratic objective")
    alpha, beta = obj.alpha, obj.beta
    x = np.asarray(x0, dtype=np.float64).copy()
    reports = []
    for k in range(1, steps + 1):
        m = k * tau
        lo, hi = quad_regime_window(alpha, beta, m)
        if lo > hi:
            break
        g = obj.full_gradient(x)
        gn = float(np.linalg.norm(g))
        if not lo <= gn <= hi:
            break
        R = _sample_builds(obj, m, trials, seed + k, tau=tau)
        x_next = x[None, :] - np.einsum("tij,j->ti", R, g)
        Zx = x_next @ obj.problem.Z.T
        grads = (
            (Zx - obj.problem.y[None, :]) @ obj.problem.Z / obj.n
            + obj.problem.lam * x_next
        ) / obj.s
        norms = np.linalg.norm(grads, axis=1)
        mean_gn = float(norms.mean())
        stderr = float(norms.std(ddof=1) / math.sqrt(trials))
        rhs = 4.0 * beta / alpha**2 * gn**2
        reports.append(
            StepReport(
                k=k,
                m=m,
                lhs=mean_gn,
                rhs=rhs,
                stderr=stderr,
                passed=mean_gn <= rhs + 4.0 * stderr,
            )
        )
        Rnom = _sample_builds(obj, m, 1, seed + 5000 + k, tau=tau)[0]
        x = x - Rnom @ g
    return reports
