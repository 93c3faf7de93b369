"""Regularized ERM objectives scaled to a unit-bounded Hessian.

Two problem families are supported: ridge regression and
L2-regularized logistic regression.  ``scale_to_unit_hessian`` divides
the objective by a constant ``s`` chosen so that every per-datapoint
Hessian sample (not just their average) has spectrum inside [0, 1].
The scaled objective carries strong-convexity / smoothness estimates
``alpha`` and ``beta`` with 0 < alpha <= beta <= 1.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg


@dataclass
class RidgeProblem:
    """Least squares with L2 penalty: (1/2n) sum (z_i'x - y_i)^2 + (lam/2)|x|^2."""

    Z: np.ndarray
    y: np.ndarray
    lam: float

    def __post_init__(self):
        self.Z = np.asarray(self.Z, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.Z.ndim != 2 or self.Z.shape[0] < 1 or self.Z.shape[1] < 1:
            raise ValueError(f"bad design matrix shape {self.Z.shape}")
        if self.y.shape != (self.Z.shape[0],):
            raise ValueError("target length does not match design matrix")
        if not (np.all(np.isfinite(self.Z)) and np.all(np.isfinite(self.y))):
            raise ValueError("non-finite data")
        if self.lam <= 0:
            raise ValueError("regularization must be positive")


@dataclass
class LogisticProblem:
    """L2-regularized logistic regression with labels in {0, 1}."""

    Z: np.ndarray
    y: np.ndarray
    lam: float

    def __post_init__(self):
        self.Z = np.asarray(self.Z, dtype=np.float64)
        # Any nonpositive label reads as class 0, positive as class 1.
        self.y = (np.asarray(self.y, dtype=np.float64) > 0).astype(np.float64)
        if self.Z.ndim != 2 or self.Z.shape[0] < 1 or self.Z.shape[1] < 1:
            raise ValueError(f"bad design matrix shape {self.Z.shape}")
        if self.y.shape != (self.Z.shape[0],):
            raise ValueError("label length does not match design matrix")
        if not np.all(np.isfinite(self.Z)):
            raise ValueError("non-finite data")
        if self.lam <= 0:
            raise ValueError("regularization must be positive")


def _sigmoid(t):
    out = np.empty_like(t)
    pos = t >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-t[pos]))
    et = np.exp(t[~pos])
    out[~pos] = et / (1.0 + et)
    return out


@dataclass
class ScaledObjective:
    """An ERM problem divided by ``s`` so all Hessian samples are <= I."""

    kind: str
    problem: object
    s: float
    alpha: float
    beta: float
    hessian_constant: bool
    n: int = field(init=False)
    d: int = field(init=False)

    def __post_init__(self):
        self.n, self.d = self.problem.Z.shape

    @property
    def lam_s(self):
        return self.problem.lam / self.s

    @property
    def inv_s(self):
        return 1.0 / self.s

    def value(self, x):
        x = self._check_x(x)
        Z, y, lam = self.problem.Z, self.problem.y, self.problem.lam
        if self.kind == "ridge":
            r = Z @ x - y
            data = 0.5 * (r @ r) / self.n
        else:
            t = Z @ x
            data = np.mean(np.logaddexp(0.0, t) - y * t)
        return (data + 0.5 * lam * (x @ x)) / self.s

    def full_gradient(self, x):
        x = self._check_x(x)
        Z, y, lam = self.problem.Z, self.problem.y, self.problem.lam
        if self.kind == "ridge":
            data = Z.T @ (Z @ x - y) / self.n
        else:
            data = Z.T @ (_sigmoid(Z @ x) - y) / self.n
        return (data + lam * x) / self.s

    def batch_gradient(self, x, batch):
        """Mean of per-datapoint gradients over ``batch``; unbiased for
        the full gradient under uniform sampling."""
        x = self._check_x(x)
        batch = np.asarray(batch, dtype=np.int64)
        if batch.size == 0:
            raise ValueError("empty gradient batch")
        if batch.min() < 0 or batch.max() >= self.n:
            raise IndexError("batch index out of range")
        Zb = self.problem.Z[batch]
        yb = self.problem.y[batch]
        lam = self.problem.lam
        if self.kind == "ridge":
            data = Zb.T @ (Zb @ x - yb) / batch.size
        else:
            data = Zb.T @ (_sigmoid(Zb @ x) - yb) / batch.size
        return (data + lam * x) / self.s

    def sample_weights(self, batch, x):
        """Curvature weight w_j of each sample X_j = (w_j z_j z_j' + lam I)/s."""
        batch = np.asarray(batch, dtype=np.int64)
        if self.kind == "ridge":
            return np.ones(batch.size)
        t = self.problem.Z[batch] @ x
        sig = _sigmoid(t)
        return sig * (1.0 - sig)

    def hessian_sample(self, i, x=None):
        if not 0 <= i < self.n:
            raise IndexError(f"sample index {i} out of range [0, {self.n})")
        z = self.problem.Z[i]
        if self.kind == "ridge":
            w = 1.0
        else:
            x = self._check_x(x)
            t = float(z @ x)
            sig = float(_sigmoid(np.array([t]))[0])
            w = sig * (1.0 - sig)
        d = self.d
        return (w * np.outer(z, z) + self.problem.lam * np.eye(d)) / self.s

    def full_hessian(self, x=None):
        Z, lam = self.problem.Z, self.problem.lam
        if self.kind == "ridge":
            data = Z.T @ Z / self.n
        else:
            x = self._check_x(x)
            w = self.sample_weights(np.arange(self.n), x)
            data = (Z * w[:, None]).T @ Z / self.n
        return (data + lam * np.eye(self.d)) / self.s

    def _check_x(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.d,):
            raise ValueError(f"expected x of shape ({self.d},), got {x.shape}")
        return x


def scale_to_unit_hessian(problem, s_override=None):
    """Rescale an ERM problem so every Hessian sample satisfies X_i <= I.

    The divisor bounds individual samples: max_i |z_i|^2 + lam for
    ridge, max_i |z_i|^2 / 4 + lam for logistic (the logistic curvature
    weight never exceeds 1/4).  ``alpha = lam / s`` is a uniform
    strong-convexity floor, and every sample also satisfies
    X_i >= alpha I.  ``s_override`` replaces the computed divisor and
    exists for negative-control experiments that deliberately violate
    the unit-Hessian scaling.
    """
    if not isinstance(problem, (RidgeProblem, LogisticProblem)):
        raise TypeError(f"unsupported problem type {type(problem)!r}")
    row_sq = np.einsum("ij,ij->i", problem.Z, problem.Z)
    if isinstance(problem, RidgeProblem):
        kind = "ridge"
        s = float(row_sq.max() + problem.lam)
        constant = True
    else:
        kind = "logistic"
        s = float(row_sq.max() / 4.0 + problem.lam)
        constant = False
    if s_override is not None:
        s = float(s_override)
    obj = ScaledObjective(
        kind=kind,
        problem=problem,
        s=s,
        alpha=problem.lam / s,
        beta=1.0,
        hessian_constant=constant,
    )
    x0 = np.zeros(problem.Z.shape[1])
    # Tightly clustered Hessian spectra stall power iteration below the
    # default tolerance; the partial estimate is then already within the
    # cluster width, which the safety factor covers.
    try:
        beta = linalg.spectral_norm_ub(obj.full_hessian(x0), iters=20000, tol=1e-9)
    except linalg.PowerIterationError as exc:
        beta = linalg.SAFETY * exc.last_estimate
    obj.beta = min(1.0, float(beta))
    return obj
