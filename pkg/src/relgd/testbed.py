"""Benchmark objectives with analytic gradients and known minima."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import Objective, ParameterError, Vector, as_vector


def _check_dim(x: Vector, n: Optional[int] = None, at_least: int = 1) -> None:
    if x.ndim != 1:
        raise ParameterError("expected a 1-D vector")
    if n is not None and x.size != n:
        raise ParameterError(f"expected dimension {n}, got {x.size}")
    if x.size < at_least:
        raise ParameterError(f"expected dimension >= {at_least}, got {x.size}")


def rosenbrock(x: Vector) -> float:
    _check_dim(x, 2)
    return float(100.0 * (x[1] - x[0] ** 2) ** 2 + (x[0] - 1.0) ** 2)


def rosenbrock_grad(x: Vector) -> Vector:
    _check_dim(x, 2)
    r = x[1] - x[0] ** 2
    return np.array([-400.0 * x[0] * r + 2.0 * (x[0] - 1.0), 200.0 * r])


def nesterov_skokov(x: Vector) -> float:
    """1/4 (1 - x_1)^2 + sum_i (x_{i+1} - 2 x_i^2 + 1)^2."""
    _check_dim(x, at_least=2)
    r = x[1:] - 2.0 * x[:-1] ** 2 + 1.0
    return float(0.25 * (1.0 - x[0]) ** 2 + np.dot(r, r))


def nesterov_skokov_grad(x: Vector) -> Vector:
    _check_dim(x, at_least=2)
    r = x[1:] - 2.0 * x[:-1] ** 2 + 1.0
    g = np.zeros_like(x, dtype=np.float64)
    g[0] = -0.5 * (1.0 - x[0])
    g[:-1] -= 8.0 * x[:-1] * r
    g[1:] += 2.0 * r
    return g


@dataclass(frozen=True)
class QuadraticSpec:
    """Diagonal quadratic 1/2 sum_i lambda_i (x_i - s_i)^2 with f* = 0."""

    eigenvalues: tuple[float, ...]
    shift: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if len(self.eigenvalues) == 0 or min(self.eigenvalues) <= 0:
            raise ParameterError("eigenvalues must be a non-empty sequence of positives")
        if self.shift is not None and len(self.shift) != len(self.eigenvalues):
            raise ParameterError("shift and eigenvalues differ in length")

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    @property
    def mu(self) -> float:
        return min(self.eigenvalues)

    @property
    def L(self) -> float:
        return max(self.eigenvalues)

    def _residual(self, x: Vector) -> Vector:
        _check_dim(x, self.dimension)
        return x if self.shift is None else x - np.asarray(self.shift)


def quadratic(spec: QuadraticSpec, x: Vector) -> float:
    r = spec._residual(x)
    return float(0.5 * np.dot(np.asarray(spec.eigenvalues) * r, r))


def quadratic_grad(spec: QuadraticSpec, x: Vector) -> Vector:
    return np.asarray(spec.eigenvalues) * spec._residual(x)


def rosenbrock_objective() -> Objective:
    return Objective(2, rosenbrock, rosenbrock_grad, f_star=0.0, name="rosenbrock")


def nesterov_skokov_objective(n: int = 100) -> Objective:
    if n < 2:
        raise ParameterError("Nesterov-Skokov needs n >= 2")
    return Objective(
        n, nesterov_skokov, nesterov_skokov_grad, f_star=0.0, name=f"nesterov_skokov_{n}"
    )


def quadratic_objective(
    eigenvalues: Sequence[float], shift: Optional[Sequence[float]] = None
) -> Objective:
    spec = QuadraticSpec(
        tuple(float(v) for v in eigenvalues),
        None if shift is None else tuple(float(v) for v in as_vector(shift)),
    )
    return Objective(
        spec.dimension,
        lambda x: quadratic(spec, x),
        lambda x: quadratic_grad(spec, x),
        f_star=0.0,
        L_hint=spec.L,
        mu_hint=spec.mu,
        name="quadratic",
    )
