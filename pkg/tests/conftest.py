import numpy as np
import pytest

# Acceptance-criterion verdicts, appended by tests/test_acceptance.py.
# Echoed in the terminal summary so every PASS/FAIL line is visible
# even when pytest captures per-test stdout.
criterion_lines = []


def pytest_terminal_summary(terminalreporter):
    if not criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in criterion_lines:
        terminalreporter.write_line(line)

from issa import data
from issa.objectives import LogisticProblem, scale_to_unit_hessian
from issa.sampling import make_stream


@pytest.fixture
def small_ridge():
    """Scaled ridge problem, n=50, d=6."""
    return scale_to_unit_hessian(
        data.generate_synthetic(data.DatasetSpec(n=50, d=6, seed=11, lam=0.05))
    )


@pytest.fixture
def small_logistic():
    rng = make_stream(21)
    Z = rng.standard_normal((60, 5))
    w = rng.standard_normal(5)
    y = (Z @ w + 0.1 * rng.standard_normal(60) > 0).astype(float)
    return scale_to_unit_hessian(LogisticProblem(Z=Z, y=y, lam=0.05))


def numeric_gradient(f, x, eps=1e-6):
    """Central-difference gradient, used as an independent oracle."""
    g = np.zeros_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += eps
        xm[i] -= eps
        g[i] = (f(xp) - f(xm)) / (2 * eps)
    return g
