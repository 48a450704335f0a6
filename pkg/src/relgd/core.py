"""Shared problem types, the inexact descent test and the per-run trace."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

Vector = NDArray[np.float64]

UINT64_MAX = 2**64 - 1


class ParameterError(ValueError):
    """A numeric argument lies outside the domain of a formula."""


class ConfigurationError(ValueError):
    """Inconsistent solver or oracle configuration."""


class TraceError(RuntimeError):
    """Iteration records were appended out of order."""


class DivergenceError(RuntimeError):
    """A non-finite objective value appeared; ``trace`` holds the run so far."""

    def __init__(self, message: str, trace: "RunTrace"):
        super().__init__(message)
        self.trace = trace


def as_vector(x: ArrayLike) -> Vector:
    """Copy ``x`` into a finite, non-empty 1-D float64 array."""
    v = np.array(x, dtype=np.float64)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.size == 0:
        raise ParameterError(f"expected a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ParameterError("vector has non-finite components")
    return v


def euclidean_norm(v: Vector) -> float:
    return math.sqrt(float(np.dot(v, v)))


@dataclass(frozen=True)
class Objective:
    """A differentiable objective with optional known optimum and constants.

    ``f_star`` is only used for reporting the gap; solvers never read it.
    """

    dimension: int
    value: Callable[[Vector], float]
    exact_gradient: Callable[[Vector], Vector]
    f_star: Optional[float] = None
    L_hint: Optional[float] = None
    mu_hint: Optional[float] = None
    name: str = "objective"

    def __post_init__(self):
        if self.dimension < 1:
            raise ParameterError("dimension must be positive")
        for hint in ("L_hint", "mu_hint"):
            val = getattr(self, hint)
            if val is not None and not val > 0:
                raise ParameterError(f"{hint} must be positive")

    def gap(self, f_value: float) -> Optional[float]:
        return None if self.f_star is None else f_value - self.f_star


@dataclass(frozen=True)
class SolverConfig:
    """Tunables shared by the three solvers.

    ``alpha`` is the assumed noise level for the adaptive-L method and the
    constant-step baseline; ``alpha_min``/``alpha_0`` drive the method that
    also adapts the noise level.  ``epsilon=None`` disables the gradient-norm
    stopping rule so that only the iteration budget applies.
    """

    L_min: float = 0.01
    L_0: float = 1.0
    alpha: float = 0.0
    alpha_min: float = 0.001
    alpha_0: float = 0.01
    epsilon: Optional[float] = None
    max_iterations: int = 1000
    max_inner_repeats: int = 60
    seed: int = 0
    descent_slack: float = 0.0

    def __post_init__(self):
        if not (self.L_min > 0 and math.isfinite(self.L_min)):
            raise ConfigurationError("L_min must be a positive finite number")
        if not (self.L_0 >= self.L_min and math.isfinite(self.L_0)):
            raise ConfigurationError("L_0 must be finite and at least L_min")
        if not 0.0 <= self.alpha < 0.5:
            raise ConfigurationError("alpha must lie in [0, 0.5)")
        if not 0.0 <= self.alpha_min < 0.5:
            raise ConfigurationError("alpha_min must lie in [0, 0.5)")
        if not self.alpha_min <= self.alpha_0 < 0.5:
            raise ConfigurationError("alpha_0 must lie in [alpha_min, 0.5)")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ConfigurationError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be positive")
        if self.max_inner_repeats < 1:
            raise ConfigurationError("max_inner_repeats must be positive")
        if not 0 <= self.seed <= UINT64_MAX:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        if self.descent_slack < 0:
            raise ConfigurationError("descent_slack must be nonnegative")

    def check_against(self, objective: Objective) -> None:
        if objective.mu_hint is not None and self.L_min < objective.mu_hint:
            raise ConfigurationError(
                f"L_min={self.L_min} is below the objective's mu={objective.mu_hint}"
            )


@dataclass(frozen=True, slots=True)
class IterationRecord:
    """State at ``x^k`` plus the parameters of the accepted step out of it.

    ``L_k``, ``alpha_k`` and ``step_size`` are the values actually used for
    the step ``x^k -> x^{k+1}`` after all acceptance-test retries.
    """

    k: int
    f_value: float
    gap: Optional[float]
    exact_grad_norm: float
    noisy_grad_norm: float
    L_k: float
    alpha_k: float
    step_size: float
    inner_repeats: int
    dist_from_x0: float


class Termination(enum.Enum):
    STOPPING_RULE = "StoppingRuleFired"
    BUDGET = "BudgetExhausted"
    INNER_CAP = "InnerCapExceeded"


@dataclass
class RunTrace:
    """Records of one run, owned by that run only."""

    x0: Vector
    records: list[IterationRecord] = field(default_factory=list)
    final_point: Optional[Vector] = None
    final_value: float = math.nan
    final_gap: Optional[float] = None
    final_exact_grad_norm: float = math.nan
    termination: Optional[Termination] = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def iterations(self) -> int:
        return len(self.records)

    def values(self) -> NDArray[np.float64]:
        """f(x^0), ..., f(x^N) including the final point."""
        vals = [r.f_value for r in self.records]
        if self.final_point is not None:
            vals.append(self.final_value)
        return np.array(vals)

    def distances(self) -> NDArray[np.float64]:
        """||x^k - x^0|| for every recorded point and the final point."""
        dists = [r.dist_from_x0 for r in self.records]
        if self.final_point is not None:
            dists.append(euclidean_norm(self.final_point - self.x0))
        return np.array(dists)


def record_iteration(trace: RunTrace, record: IterationRecord) -> RunTrace:
    expected = len(trace.records)
    if record.k != expected:
        raise TraceError(f"record k={record.k} appended where k={expected} was expected")
    trace.records.append(record)
    return trace


def descent_test(
    f_next: float,
    f_curr: float,
    g_tilde: Vector,
    displacement: Vector,
    L: float,
    alpha: float,
    slack: float = 0.0,
) -> bool:
    """Inexact descent inequality used as the acceptance test.

    True iff ``f_next`` does not exceed the quadratic model built from the
    noisy gradient, widened by ``alpha/(1-alpha) * |g| * |d|``.  ``slack``
    is a relative tolerance on ``|f_curr|``; zero means an exact comparison.
    """
    d_norm = euclidean_norm(displacement)
    rhs = (
        f_curr
        + float(np.dot(g_tilde, displacement))
        + 0.5 * L * d_norm * d_norm
        + alpha / (1.0 - alpha) * euclidean_norm(g_tilde) * d_norm
    )
    if slack:
        rhs += slack * abs(f_curr)
    return f_next <= rhs
