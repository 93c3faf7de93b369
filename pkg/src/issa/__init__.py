"""Stochastic second-order optimization via Neumann-series
inverse-Hessian estimation, with baselines and a validation harness."""

from .estimator import (
    DivergenceError,
    EstimatorState,
    approx_error_bound,
    expected_estimator,
    init_state,
    practical_update,
    theoretical_rebuild,
)
from .objectives import (
    LogisticProblem,
    RidgeProblem,
    ScaledObjective,
    scale_to_unit_hessian,
)
from .optimizer import (
    RunConfig,
    TraceRow,
    compute_mu,
    issa_step,
    online_run,
    quad_regime_check,
    run,
    step_size_c_inf,
    step_size_theorem1,
)
from .sampling import SamplingSpec, draw_tau, make_stream

__all__ = [
    "DivergenceError",
    "EstimatorState",
    "LogisticProblem",
    "RidgeProblem",
    "RunConfig",
    "SamplingSpec",
    "ScaledObjective",
    "TraceRow",
    "approx_error_bound",
    "compute_mu",
    "draw_tau",
    "expected_estimator",
    "init_state",
    "issa_step",
    "make_stream",
    "online_run",
    "practical_update",
    "quad_regime_check",
    "run",
    "scale_to_unit_hessian",
    "step_size_c_inf",
    "step_size_theorem1",
    "theoretical_rebuild",
]

__version__ = "0.1.0"
