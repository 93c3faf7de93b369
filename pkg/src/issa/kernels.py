"""Hot numeric kernels for the inverse-Hessian estimator fold.

Every Hessian sample handled here has the rank-one-plus-ridge form

    X_j = (w_j * z_j z_j^T + lam * I) / s

so the estimator recursion  R <- I + (I - X_j) R  reduces to a scaled
rank-one update.  The kernels are compiled with numba unless the
environment variable ``ISSA_PURE_NUMPY`` is set to a truthy value, in
which case vectorized numpy fallbacks are used.  Both paths compute the
same floating point operations in the same order per trial, but the
numpy Monte Carlo fallback batches across trials, so results can differ
at rounding level between paths; within one path results are
deterministic.
"""

import os

import numpy as np

_PURE_NUMPY = os.environ.get("ISSA_PURE_NUMPY", "").lower() in ("1", "true", "yes")

try:
    if _PURE_NUMPY:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _fold_rank1_py(R, zb, w, lam_s, inv_s):
    # R <- I + (I - X_j) R  for each row z_j of zb, in order.
    # I - X_j = (1 - lam_s) I - (w_j * inv_s) z_j z_j^T
    d = R.shape[0]
    decay = 1.0 - lam_s
    out = R.copy()
    for j in range(zb.shape[0]):
        z = zb[j]
        zR = z @ out
        out = decay * out - (w[j] * inv_s) * np.outer(z, zR)
        for i in range(d):
            out[i, i] += 1.0
    return out


def _mc_fold_rank1_py(Zt, Wt, lam_s, inv_s):
    # Independent folds for T trials at once.  Zt: (T, m, d), Wt: (T, m).
    T, m, d = Zt.shape
    out = np.empty((T, d, d))
    for t in range(T):
        out[t] = _fold_rank1_py(np.eye(d), Zt[t], Wt[t], lam_s, inv_s)
    return out


def _mc_fold_rank1_batched(Zt, Wt, lam_s, inv_s):
    # numpy fallback: batch the trial axis instead of jit-compiling the loop.
    T, m, d = Zt.shape
    decay = 1.0 - lam_s
    R = np.broadcast_to(np.eye(d), (T, d, d)).copy()
    idx = np.arange(d)
    for j in range(m):
        z = Zt[:, j, :]
        zR = np.einsum("td,tde->te", z, R)
        R = decay * R - (inv_s * Wt[:, j])[:, None, None] * np.einsum(
            "td,te->tde", z, zR
        )
        R[:, idx, idx] += 1.0
    return R


if HAVE_NUMBA:
    _fold_rank1 = numba.njit(cache=True)(_fold_rank1_py)

    @numba.njit(cache=True, parallel=True)
    def _mc_fold_rank1(Zt, Wt, lam_s, inv_s):
        T, m, d = Zt.shape
        out = np.empty((T, d, d))
        for t in numba.prange(T):
            out[t] = _fold_rank1(np.eye(d), Zt[t], Wt[t], lam_s, inv_s)
        return out

else:
    _fold_rank1 = _fold_rank1_py
    _mc_fold_rank1 = _mc_fold_rank1_batched


def fold_rank1(R, zb, w, lam_s, inv_s):
    """Fold a batch of rank-one-plus-ridge samples into the estimate R.

    Applies R <- I + (I - X_j) R for each sample, in the order given by
    the rows of ``zb``.  Returns a new array; ``R`` is not modified.
    """
    R = np.ascontiguousarray(R, dtype=np.float64)
    zb = np.ascontiguousarray(zb, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    return _fold_rank1(R, zb, w, float(lam_s), float(inv_s))


def mc_fold_rank1(Zt, Wt, lam_s, inv_s):
    """Build one estimator per trial from scratch (R^0 = I).

    ``Zt`` has shape (trials, m, d): trial t folds the m rows Zt[t] in
    order.  Returns the stack of estimates, shape (trials, d, d).
    """
    Zt = np.ascontiguousarray(Zt, dtype=np.float64)
    Wt = np.ascontiguousarray(Wt, dtype=np.float64)
    return _mc_fold_rank1(Zt, Wt, float(lam_s), float(inv_s))


def backend():
    """Name of the active kernel backend, 'numba' or 'numpy'."""
    return "numba" if HAVE_NUMBA else "numpy"
