"""Gradient descent with relative-error gradients.

Three methods share the update ``x <- x - h * g_tilde``:

* ``run_constant_step``: fixed ``h`` from known L and alpha, no acceptance test.
* ``run_adaptive_L``: L is halved before each step and doubled until the
  inexact descent test accepts the trial point; alpha is fixed.
* ``run_adaptive_L_alpha``: L and the assumed noise level adapt together,
  through ``beta = 0.5 - alpha`` so that alpha never reaches 0.5.
"""

from __future__ import annotations

import enum
import math
from typing import Optional

import numpy as np

from .core import (
    ConfigurationError,
    DivergenceError,
    IterationRecord,
    Objective,
    ParameterError,
    RunTrace,
    SolverConfig,
    Termination,
    Vector,
    as_vector,
    descent_test,
    euclidean_norm,
    record_iteration,
)
from .noise import NoisyOracle, OnRequest


class SolverKind(enum.Enum):
    CONSTANT_STEP = "constant_step"
    ADAPTIVE_L = "adaptive_L"
    ADAPTIVE_L_ALPHA = "adaptive_L_alpha"


def step_size(L: float, alpha: float) -> float:
    """Step minimising the inexact descent bound: (1/L)(1-2a)/(1-a)."""
    if not L > 0:
        raise ParameterError("L must be positive")
    if not 0.0 <= alpha < 0.5:
        raise ParameterError("alpha must lie in [0, 0.5); the step vanishes at 0.5")
    return (1.0 / L) * (1.0 - 2.0 * alpha) / (1.0 - alpha)


def _step_from_beta(L: float, beta: float) -> float:
    # same as step_size(L, 0.5 - beta) but exact when beta is tiny
    return (1.0 / L) * (2.0 * beta) / (0.5 + beta)


def constant_step_size(L: float, alpha: float) -> float:
    if not L > 0:
        raise ParameterError("L must be positive")
    if not 0.0 <= alpha < 1.0:
        raise ParameterError("alpha must lie in [0, 1)")
    return (1.0 / L) * (1.0 - alpha) / (1.0 + alpha) ** 2


def stopping_rule(noisy_grad_norm: float, epsilon: float, alpha_current: float) -> bool:
    return noisy_grad_norm**2 <= 2.0 * epsilon * (1.0 - alpha_current) ** 2


def _start(objective: Objective, x0) -> tuple[Vector, RunTrace]:
    x = as_vector(x0)
    if x.size != objective.dimension:
        raise ConfigurationError(
            f"x0 has dimension {x.size}, objective expects {objective.dimension}"
        )
    return x, RunTrace(x0=x.copy())


def _finish(trace: RunTrace, objective: Objective, x: Vector, f_x: float, how: Termination):
    trace.final_point = x
    trace.final_value = f_x
    trace.final_gap = objective.gap(f_x)
    if math.isfinite(f_x):
        trace.final_exact_grad_norm = euclidean_norm(
            np.asarray(objective.exact_gradient(x), dtype=np.float64)
        )
    trace.termination = how
    return trace


def run_constant_step(
    objective: Objective,
    oracle: NoisyOracle,
    x0,
    L: float,
    alpha: float,
    config: SolverConfig,
) -> RunTrace:
    """Baseline with constant step (1/L)(1-a)/(1+a)^2; needs the true L and alpha."""
    h = constant_step_size(L, alpha)
    x, trace = _start(objective, x0)
    f_x = objective.value(x)
    for k in range(config.max_iterations):
        if not math.isfinite(f_x):
            _finish(trace, objective, x, f_x, Termination.BUDGET)
            raise DivergenceError(f"non-finite objective at iteration {k}", trace)
        sample = oracle.query(x)
        g_norm = euclidean_norm(sample.noisy)
        record_iteration(
            trace,
            IterationRecord(
                k, f_x, objective.gap(f_x), euclidean_norm(sample.exact), g_norm,
                L, alpha, h, 0, euclidean_norm(x - trace.x0),
            ),
        )
        x = x - h * sample.noisy
        f_x = objective.value(x)
        if config.epsilon is not None and stopping_rule(g_norm, config.epsilon, alpha):
            how = Termination.STOPPING_RULE
            break
    else:
        how = Termination.BUDGET
    if not math.isfinite(f_x):
        _finish(trace, objective, x, f_x, how)
        raise DivergenceError("non-finite objective at the final iterate", trace)
    return _finish(trace, objective, x, f_x, how)


def run_adaptive_L(
    objective: Objective, oracle: NoisyOracle, x0, config: SolverConfig
) -> RunTrace:
    """Adaptive-L method with a known noise level ``config.alpha``.

    The noisy gradient at x^k is drawn once per outer iteration; retries only
    change L.
    """
    if isinstance(oracle.mode, OnRequest):
        raise ConfigurationError("the adaptive-L method takes a fixed-accuracy oracle")
    config.check_against(objective)
    alpha = config.alpha
    x, trace = _start(objective, x0)
    f_x = objective.value(x)
    L = config.L_0
    for k in range(config.max_iterations):
        sample = oracle.query(x)
        g = sample.noisy
        g_norm = euclidean_norm(g)
        L_next = max(L / 2.0, config.L_min)
        repeats = 0
        while True:
            h = step_size(L_next, alpha)
            x_new = x - h * g
            f_new = objective.value(x_new)
            if descent_test(f_new, f_x, g, x_new - x, L_next, alpha, config.descent_slack):
                break
            repeats += 1
            if repeats > config.max_inner_repeats:
                return _finish(trace, objective, x, f_x, Termination.INNER_CAP)
            L_next *= 2.0
        record_iteration(
            trace,
            IterationRecord(
                k, f_x, objective.gap(f_x), euclidean_norm(sample.exact), g_norm,
                L_next, alpha, h, repeats, euclidean_norm(x - trace.x0),
            ),
        )
        x, f_x, L = x_new, f_new, L_next
        if config.epsilon is not None and stopping_rule(g_norm, config.epsilon, alpha):
            return _finish(trace, objective, x, f_x, Termination.STOPPING_RULE)
    return _finish(trace, objective, x, f_x, Termination.BUDGET)


def run_adaptive_L_alpha(
    objective: Objective,
    oracle: NoisyOracle,
    x0,
    config: SolverConfig,
    on_request: bool = True,
) -> RunTrace:
    """Method adapting both L and the assumed noise level.

    With ``on_request=True`` the oracle must honour a requested accuracy
    (floor ``alpha_min``) and is re-queried at the current alpha on every
    retry.  With ``on_request=False`` the oracle has a fixed, unknown noise
    level and its gradient is drawn once per outer iteration.
    """
    if on_request:
        if not isinstance(oracle.mode, OnRequest):
            raise ConfigurationError("on_request=True needs an OnRequest oracle")
    elif isinstance(oracle.mode, OnRequest):
        raise ConfigurationError("on_request=False needs a fixed-accuracy oracle")
    config.check_against(objective)
    beta_max = 0.5 - config.alpha_min
    beta = 0.5 - config.alpha_0
    x, trace = _start(objective, x0)
    f_x = objective.value(x)
    L = config.L_0
    for k in range(config.max_iterations):
        L_next = max(L / 2.0, config.L_min)
        beta_next = min(2.0 * beta, beta_max)
        alpha_next = 0.5 - beta_next
        sample = oracle.query(x, alpha_next) if on_request else oracle.query(x)
        repeats = 0
        while True:
            assert beta_next > 0.0, beta_next
            g = sample.noisy
            h = _step_from_beta(L_next, beta_next)
            x_new = x - h * g
            f_new = objective.value(x_new)
            if descent_test(
                f_new, f_x, g, x_new - x, L_next, alpha_next, config.descent_slack
            ):
                break
            repeats += 1
            if repeats > config.max_inner_repeats:
                return _finish(trace, objective, x, f_x, Termination.INNER_CAP)
            L_next *= 2.0
            beta_next *= 0.5
            alpha_next = 0.5 - beta_next
            if on_request:
                sample = oracle.query(x, alpha_next)
        g_norm = euclidean_norm(sample.noisy)
        record_iteration(
            trace,
            IterationRecord(
                k, f_x, objective.gap(f_x), euclidean_norm(sample.exact), g_norm,
                L_next, alpha_next, h, repeats, euclidean_norm(x - trace.x0),
            ),
        )
        x, f_x, L, beta = x_new, f_new, L_next, beta_next
        if config.epsilon is not None and stopping_rule(g_norm, config.epsilon, alpha_next):
            return _finish(trace, objective, x, f_x, Termination.STOPPING_RULE)
    return _finish(trace, objective, x, f_x, Termination.BUDGET)


def inner_repeat_total(trace: RunTrace) -> int:
    """Number of failed acceptance tests over the whole run."""
    return sum(r.inner_repeats for r in trace.records)


def acceptance_test_count(trace: RunTrace) -> int:
    """Acceptance-test executions: one success per iteration plus every failure."""
    return len(trace.records) + inner_repeat_total(trace)


def run_solver(
    kind: SolverKind,
    objective: Objective,
    oracle: NoisyOracle,
    x0,
    config: SolverConfig,
    L: Optional[float] = None,
    on_request: bool = False,
) -> RunTrace:
    if kind is SolverKind.CONSTANT_STEP:
        if L is None:
            raise ConfigurationError("the constant-step baseline needs an explicit L")
        return run_constant_step(objective, oracle, x0, L, config.alpha, config)
    if kind is SolverKind.ADAPTIVE_L:
        return run_adaptive_L(objective, oracle, x0, config)
    return run_adaptive_L_alpha(objective, oracle, x0, config, on_request=on_request)
