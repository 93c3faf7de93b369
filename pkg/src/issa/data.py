"""Dataset generation and ingestion.

Synthetic ridge data draws design entries from a truncated standard
normal (rejection sampling, deterministic per seed) with a noisy linear
target.  Real datasets arrive in libsvm sparse text format:
``label idx:val idx:val ...`` with 1-based feature indices.
"""

from dataclasses import dataclass

import numpy as np

from .objectives import LogisticProblem, RidgeProblem
from .sampling import make_stream

DEFAULT_TRUNCATION = 3.0
NOISE_SCALE = 0.01


@dataclass(frozen=True)
class DatasetSpec:
    """Synthetic dataset description; see generate_synthetic."""

    n: int
    d: int
    seed: int
    truncation: float = DEFAULT_TRUNCATION
    lam: float = 1e-2

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        if self.truncation <= 0:
            raise ValueError("truncation must be positive")


def truncated_normal(rng, shape, truncation):
    """Standard normals with rejection outside [-truncation, truncation]."""
    total = int(np.prod(shape))
    out = np.empty(total)
    filled = 0
    while filled < total:
        draw = rng.standard_normal(total - filled)
        keep = draw[np.abs(draw) <= truncation]
        out[filled : filled + keep.size] = keep
        filled += keep.size
    return out.reshape(shape)


def generate_synthetic(spec):
    """Deterministic synthetic ridge problem for the given spec."""
    rng = make_stream(spec.seed)
    Z = truncated_normal(rng, (spec.n, spec.d), spec.truncation)
    w_true = rng.standard_normal(spec.d)
    noise = rng.standard_normal(spec.n)
    y = Z @ w_true + NOISE_SCALE * noise
    return RidgeProblem(Z=Z, y=y, lam=spec.lam)


def ridge_with_alpha(n, d, alpha, seed, truncation=DEFAULT_TRUNCATION):
    """Synthetic ridge problem whose scaled strong-convexity floor is
    exactly ``alpha``.

    The scaling divisor is s = max_i |z_i|^2 + lam, so choosing
    lam = alpha * max_i |z_i|^2 / (1 - alpha) gives lam / s = alpha.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    rng = make_stream(seed)
    Z = truncated_normal(rng, (n, d), truncation)
    w_true = rng.standard_normal(d)
    y = Z @ w_true + NOISE_SCALE * rng.standard_normal(n)
    max_sq = float(np.einsum("ij,ij->i", Z, Z).max())
    lam = alpha * max_sq / (1.0 - alpha)
    return RidgeProblem(Z=Z, y=y, lam=lam)


def ridge_unscaled(n, d, beta, seed, lam=0.05):
    """Ridge problem whose full Hessian has top eigenvalue ``beta``,
    deliberately left unscaled.

    Rows share a common norm, so every rank-one Hessian sample has top
    eigenvalue near beta * d: the averaged Hessian hits beta, but the
    samples themselves wildly overshoot it.  Used as a negative control
    for checks that assume unit-Hessian scaling.
    """
    if beta <= lam:
        raise ValueError("need beta > lam")
    rng = make_stream(seed)
    Z = truncated_normal(rng, (n, d), DEFAULT_TRUNCATION)
    Z /= np.linalg.norm(Z, axis=1, keepdims=True)
    top = float(np.linalg.eigvalsh(Z.T @ Z / n).max())
    Z *= np.sqrt((beta - lam) / top)
    w_true = rng.standard_normal(d)
    y = Z @ w_true + NOISE_SCALE * rng.standard_normal(n)
    return RidgeProblem(Z=Z, y=y, lam=lam)


def random_spd(d, alpha, beta, seed):
    """Random SPD matrix with spectrum spread over [alpha, beta]."""
    if not 0 < alpha <= beta:
        raise ValueError("need 0 < alpha <= beta")
    rng = make_stream(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    spectrum = np.linspace(alpha, beta, d)
    return (Q * spectrum) @ Q.T


class LibsvmFormatError(ValueError):
    """Malformed libsvm line; message carries the line number."""


def load_libsvm_raw(path):
    """Parse a libsvm text file into a dense (Z, y) pair."""
    rows = []
    labels = []
    max_idx = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                labels.append(float(parts[0]))
            except ValueError as exc:
                raise LibsvmFormatError(f"line {lineno}: bad label {parts[0]!r}") from exc
            feats = []
            for tok in parts[1:]:
                try:
                    idx_s, val_s = tok.split(":", 1)
                    idx = int(idx_s)
                    val = float(val_s)
                except ValueError as exc:
                    raise LibsvmFormatError(
                        f"line {lineno}: bad feature token {tok!r}"
                    ) from exc
                if idx < 1:
                    raise LibsvmFormatError(f"line {lineno}: index {idx} not 1-based")
                feats.append((idx, val))
                max_idx = max(max_idx, idx)
            rows.append(feats)
    if not rows:
        raise LibsvmFormatError("empty dataset file")
    Z = np.zeros((len(rows), max_idx))
    for i, feats in enumerate(rows):
        for idx, val in feats:
            Z[i, idx - 1] = val
    return Z, np.asarray(labels)


def load_libsvm(path, lam):
    """Load a libsvm file as a logistic problem (labels mapped to {0, 1})."""
    Z, y = load_libsvm_raw(path)
    return LogisticProblem(Z=Z, y=y, lam=lam)


def load_libsvm_ridge(path, lam):
    """Load a libsvm file as a ridge problem with real-valued targets."""
    Z, y = load_libsvm_raw(path)
    return RidgeProblem(Z=Z, y=y, lam=lam)


def write_libsvm(path, Z, y):
    """Write a dense (Z, y) pair in libsvm format with full precision."""
    with open(path, "w") as fh:
        for zi, yi in zip(Z, y):
            toks = [f"{yi:.17g}"]
            toks.extend(f"{j + 1}:{v:.17g}" for j, v in enumerate(zi) if v != 0.0)
            fh.write(" ".join(toks) + "\n")
