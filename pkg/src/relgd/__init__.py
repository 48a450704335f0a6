"""Gradient descent for PL objectives with relative-error gradients."""

from .core import (
    ConfigurationError,
    DivergenceError,
    IterationRecord,
    Objective,
    ParameterError,
    RunTrace,
    SolverConfig,
    Termination,
    descent_test,
    euclidean_norm,
    record_iteration,
)
from .noise import Exact, FixedRelative, NoisyOracle, OnRequest, noisy_gradient, sample_ball
from .solvers import (
    SolverKind,
    acceptance_test_count,
    constant_step_size,
    inner_repeat_total,
    run_adaptive_L,
    run_adaptive_L_alpha,
    run_constant_step,
    step_size,
    stopping_rule,
)

__version__ = "0.1.0"
