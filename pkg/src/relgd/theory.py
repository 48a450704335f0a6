"""Closed-form convergence, complexity and trajectory bounds.

All functions are pure; none of them looks at solver state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ParameterError


def _check_alpha(alpha: float, name: str = "alpha") -> None:
    if not 0.0 <= alpha < 0.5:
        raise ParameterError(f"{name} must lie in [0, 0.5), got {alpha}")


def _check_positive(**values: float) -> None:
    for name, v in values.items():
        if not (v > 0 and math.isfinite(v)):
            raise ParameterError(f"{name} must be positive and finite, got {v}")


def xi_alg1(alpha: float) -> float:
    """Rate modifier (1 - 2 alpha)^2."""
    _check_alpha(alpha)
    return (1.0 - 2.0 * alpha) ** 2


def xi_no_assumption(alpha_k: float, alpha_true: float) -> float:
    """Rate modifier when the oracle accuracy cannot be requested."""
    _check_alpha(alpha_k, "alpha_k")
    _check_alpha(alpha_true, "alpha_true")
    return (1.0 - 2.0 * alpha_k) ** 2 * (1.0 - alpha_true) ** 2 / (1.0 - alpha_k) ** 2


def l_max_alg1(L: float) -> float:
    _check_positive(L=L)
    return 2.0 * L


def l_max_alg2(L: float, alpha: float, alpha_min: float) -> float:
    _check_positive(L=L)
    _check_alpha(alpha)
    if not 0.0 <= alpha_min <= alpha:
        raise ParameterError("alpha_min must lie in [0, alpha]")
    return 2.0 * L * max(1.0, (0.5 - alpha_min) / (0.5 - alpha))


def alpha_max_alg2(alpha: float, L: float, L_min: float) -> float:
    _check_alpha(alpha)
    _check_positive(L=L, L_min=L_min)
    if L < L_min:
        raise ParameterError("L must be at least L_min")
    return 0.5 - (0.5 - alpha) / 2.0 * min(1.0, L_min / L)


def iteration_bound(L_max: float, mu: float, xi: float, epsilon: float, initial_gap: float) -> int:
    """ceil((L_max / (mu xi)) * ln(mu * gap0 / eps)), at least 1."""
    _check_positive(L_max=L_max, mu=mu, xi=xi, epsilon=epsilon)
    if not (initial_gap >= 0 and math.isfinite(initial_gap)):
        raise ParameterError("initial_gap must be nonnegative")
    ratio = mu * initial_gap / epsilon
    if ratio <= 1.0:
        return 1
    return max(1, math.ceil(L_max / (mu * xi) * math.log(ratio)))


def trajectory_radius(L_max: float, mu: float, xi: float, L_min: float, initial_gap: float) -> float:
    _check_positive(L_max=L_max, mu=mu, xi=xi, L_min=L_min)
    if not (initial_gap >= 0 and math.isfinite(initial_gap)):
        raise ParameterError("initial_gap must be nonnegative")
    return 2.0 * L_max / (mu * xi) * math.sqrt(2.0 * initial_gap / L_min)


def inner_repeat_bound(N: int, L: float, L_min: float, alpha: float, alpha_min: float) -> float:
    """Upper bound on acceptance-test executions over N iterations."""
    if N < 1:
        raise ParameterError("N must be positive")
    _check_positive(L=L, L_min=L_min)
    _check_alpha(alpha)
    if not 0.0 <= alpha_min <= alpha:
        raise ParameterError("alpha_min must lie in [0, alpha]")
    return 2 * N + math.log2(2.0 * max(L / L_min, (0.5 - alpha_min) / (0.5 - alpha)))


def constant_rate_factor(L: float, mu: float, alpha: float) -> float:
    _check_positive(L=L, mu=mu)
    if mu > L:
        raise ParameterError("mu must not exceed L")
    if not 0.0 <= alpha < 1.0:
        raise ParameterError("alpha must lie in [0, 1)")
    return 1.0 - (mu / L) * (1.0 - alpha) ** 2 / (1.0 + alpha) ** 2


def rate_factor(L_max: float, mu: float, xi: float) -> float:
    _check_positive(L_max=L_max, mu=mu, xi=xi)
    return 1.0 - mu / L_max * xi


@dataclass(frozen=True)
class ProblemConstants:
    L: float
    mu: float
    alpha: float
    alpha_min: float
    L_min: float
    initial_gap: float

    def __post_init__(self):
        _check_positive(L=self.L, mu=self.mu, L_min=self.L_min)
        _check_alpha(self.alpha)
        if not 0.0 <= self.alpha_min <= self.alpha:
            raise ParameterError("alpha_min must lie in [0, alpha]")
        if self.mu > self.L:
            raise ParameterError("mu must not exceed L")
        if self.L_min > self.L:
            raise ParameterError("L_min must not exceed L")
        if not (self.initial_gap >= 0 and math.isfinite(self.initial_gap)):
            raise ParameterError("initial_gap must be nonnegative")


@dataclass(frozen=True)
class TheoryBounds:
    xi: float
    xi_max: float
    L_max_alg1: float
    L_max_alg2: float
    alpha_max: float
    N_star: int
    N_star_star: int
    traj_radius_alg1: float
    traj_radius_alg2: float
    rate_factor: float
    rate_factor_alg2: float


def compute_bounds(c: ProblemConstants, epsilon: float) -> TheoryBounds:
    xi = xi_alg1(c.alpha)
    L1 = l_max_alg1(c.L)
    L2 = l_max_alg2(c.L, c.alpha, c.alpha_min)
    a_max = alpha_max_alg2(c.alpha, c.L, c.L_min)
    xi_max = xi_alg1(a_max)
    return TheoryBounds(
        xi=xi,
        xi_max=xi_max,
        L_max_alg1=L1,
        L_max_alg2=L2,
        alpha_max=a_max,
        N_star=iteration_bound(L1, c.mu, xi, epsilon, c.initial_gap),
        N_star_star=iteration_bound(L2, c.mu, xi_max, epsilon, c.initial_gap),
        traj_radius_alg1=trajectory_radius(L1, c.mu, xi, c.L_min, c.initial_gap),
        traj_radius_alg2=trajectory_radius(L2, c.mu, xi_max, c.L_min, c.initial_gap),
        rate_factor=rate_factor(L1, c.mu, xi),
        rate_factor_alg2=rate_factor(L2, c.mu, xi_max),
    )
