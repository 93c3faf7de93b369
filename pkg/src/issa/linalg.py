"""Dense linear algebra helpers: spectral estimates and an SPD solve oracle.

Spectral estimates are power-iteration based with a deterministic start
vector and a multiplicative safety factor, so that the returned value is
reliably an upper bound on the largest eigenvalue (respectively a lower
bound on the smallest).  The SPD solver is a Cholesky factorization used
by tests and validation only, never by the optimizer itself.
"""

import numpy as np
from scipy.linalg import cho_factor, cho_solve

# Over-estimate lambda_max / under-estimate lambda_min by this factor.
# A slight over-estimate of the smoothness constant only slows steps;
# an under-estimate would break the unit-Hessian scaling.
SAFETY = 1.01

DEFAULT_ITERS = 1000
DEFAULT_TOL = 1e-10

SYM_TOL = 1e-12


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge; carries the last estimate."""

    def __init__(self, message, last_estimate):
        super().__init__(message)
        self.last_estimate = last_estimate


class NotSPDError(ValueError):
    """Cholesky factorization hit a non-positive pivot."""


def check_square(M):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def check_symmetric(M):
    M = check_square(M)
    scale = max(1.0, np.abs(M).max())
    if np.abs(M - M.T).max() > SYM_TOL * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    return M


def matvec(M, v):
    M = check_square(M)
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != M.shape[1]:
        raise ValueError(f"dimension mismatch: {M.shape} @ {v.shape}")
    return M @ v


def _power_iteration(M, iters, tol):
    # Rayleigh-quotient power iteration from the normalized all-ones
    # vector; deterministic by construction.
    d = M.shape[0]
    v = np.full(d, 1.0 / np.sqrt(d))
    lam = v @ (M @ v)
    for _ in range(iters):
        w = M @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        Mv = M @ v
        lam = v @ Mv
        # Residual-based stop: a small residual pins the Rayleigh
        # quotient to the spectrum even when eigenvalues cluster and
        # the eigenvector itself converges slowly.
        if np.linalg.norm(Mv - lam * v) <= tol * max(1.0, abs(lam)):
            return lam
    raise PowerIterationError(
        f"power iteration did not converge in {iters} iterations", lam
    )


def spectral_norm_ub(M, iters=DEFAULT_ITERS, tol=DEFAULT_TOL):
    """Upper bound on lambda_max of a symmetric PSD matrix.

    The raw power-iteration estimate is inflated by SAFETY so the return
    value over-covers the true largest eigenvalue.
    """
    M = check_symmetric(M)
    return SAFETY * _power_iteration(M, iters, tol)


def min_eig_lb(M, iters=DEFAULT_ITERS, tol=DEFAULT_TOL):
    """Lower bound on lambda_min of a symmetric PSD matrix.

    Runs power iteration on (shift*I - M) with a shift safely above
    lambda_max, then deflates the recovered smallest eigenvalue by
    SAFETY.
    """
    M = check_symmetric(M)
    lam_max = _power_iteration(M, iters, tol)
    shift = SAFETY * lam_max + 1.0
    nu = _power_iteration(shift * np.eye(M.shape[0]) - M, iters, tol)
    return (shift - nu) / SAFETY


def solve_spd(M, b):
    """Solve M v = b for symmetric positive definite M via Cholesky."""
    M = check_symmetric(M)
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (M.shape[0],):
        raise ValueError(f"dimension mismatch: {M.shape} vs {b.shape}")
    try:
        c, low = cho_factor(M)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError(str(exc)) from exc
    return cho_solve((c, low), b)
