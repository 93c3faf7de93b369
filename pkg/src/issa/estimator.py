"""Neumann-series inverse-Hessian estimate and its closed-form moments.

The running estimate R starts at the identity and absorbs one Hessian
sample at a time through R <- I + (I - X_j) R.  With samples averaging
to H and spectra inside [0, I], the expectation of R after m steps is
the truncated series sum_{j=0..m} (I - H)^j, which approaches H^{-1}
geometrically.

Two maintenance modes exist.  ``practical`` folds samples incrementally
and is valid only when samples do not depend on the iterate (constant
Hessian).  ``theoretical`` rebuilds R from scratch at the current
iterate, folding the most recent ``truncate_cap`` indices of the
accumulated history.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels

# Entry magnitude above which the estimate is declared divergent.
# Unscaled inputs (samples with spectrum above I) blow up the fold;
# failing loudly beats propagating overflow.
DIVERGENCE_LIMIT = 1e12

DEFAULT_TRUNCATE_CAP = 100


class DivergenceError(RuntimeError):
    """The estimator fold produced entries beyond DIVERGENCE_LIMIT."""


@dataclass
class EstimatorState:
    """Current estimate R plus the ordered sample-index history.

    The history is a concatenated sequence: the same index may recur
    across rounds, so after k rounds of tau draws ``steps == k * tau``.
    """

    R: np.ndarray
    history: list = field(default_factory=list)
    steps: int = 0
    mode: str = "practical"
    truncate_cap: int | None = None


def init_state(d, mode="practical", truncate_cap=None):
    if mode not in ("practical", "theoretical"):
        raise ValueError(f"unknown estimator mode {mode!r}")
    return EstimatorState(R=np.eye(d), mode=mode, truncate_cap=truncate_cap)


def _guard(R):
    if not np.all(np.isfinite(R)) or np.abs(R).max() > DIVERGENCE_LIMIT:
        raise DivergenceError(
            "inverse-Hessian estimate diverged; is the objective scaled "
            "so Hessian samples stay below the identity?"
        )
    return R


def practical_update(state, draw, obj):
    """Fold one draw of samples into R incrementally.

    Only valid when the objective's Hessian samples are independent of
    the iterate; the samples folded earlier are never revisited.
    """
    if state.mode != "practical":
        raise ValueError("practical_update requires a practical-mode state")
    if not obj.hessian_constant:
        raise ValueError(
            "practical update is invalid for iterate-dependent Hessian samples"
        )
    draw = np.asarray(draw, dtype=np.int64)
    zb = obj.problem.Z[draw]
    w = obj.sample_weights(draw, None)
    state.R = _guard(kernels.fold_rank1(state.R, zb, w, obj.lam_s, obj.inv_s))
    state.history.append(draw)
    state.steps += draw.size
    return state


def theoretical_rebuild(state, x, obj):
    """Recompute R from the identity at the current iterate.

    Folds the last min(steps, truncate_cap) history indices, with
    sample curvature evaluated at ``x``.
    """
    if state.mode != "theoretical":
        raise ValueError("theoretical_rebuild requires a theoretical-mode state")
    hist = np.concatenate(state.history) if state.history else np.empty(0, np.int64)
    cap = state.truncate_cap
    if cap is not None:
        hist = hist[max(0, hist.size - cap) :]
    d = obj.d
    if hist.size == 0:
        state.R = np.eye(d)
        return state
    zb = obj.problem.Z[hist]
    w = obj.sample_weights(hist, x)
    state.R = _guard(kernels.fold_rank1(np.eye(d), zb, w, obj.lam_s, obj.inv_s))
    return state


def record_draw(state, draw):
    """Extend the history without folding (theoretical mode bookkeeping)."""
    draw = np.asarray(draw, dtype=np.int64)
    state.history.append(draw)
    state.steps += draw.size
    return state


def expected_estimator(H, m):
    """Closed-form expectation of R after m steps: sum_{j=0..m} (I-H)^j.

    Computed by Horner-style folding S <- I + (I-H) S, which mirrors the
    stochastic recursion with every sample replaced by its mean.
    """
    if m < 0:
        raise ValueError("step count must be nonnegative")
    H = np.asarray(H, dtype=np.float64)
    d = H.shape[0]
    eye = np.eye(d)
    A = eye - H
    S = eye.copy()
    for _ in range(m):
        S = eye + A @ S
    return S


def approx_error_bound(alpha, m):
    """Spectral-norm distance of the expected estimate from H^{-1}:
    at most (1-alpha)^m / alpha for lambda_min(H) >= alpha > 0."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    return (1.0 - alpha) ** m / alpha
