"""Gradient oracles with relative error.

Every emitted gradient is ``grad f(x) + e`` with ``e`` drawn uniformly from
the ball of radius ``alpha_eff * |grad f(x)|``, so the relative-error bound
holds for each call rather than on average.  Randomness comes from numpy's
PCG64 bit generator seeded through ``SeedSequence``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .core import ConfigurationError, Objective, ParameterError, Vector, euclidean_norm

RNG_ALGORITHM = "numpy.random.PCG64"


@dataclass(frozen=True)
class Exact:
    pass


@dataclass(frozen=True)
class FixedRelative:
    alpha: float

    def __post_init__(self):
        if not (self.alpha >= 0 and np.isfinite(self.alpha)):
            raise ConfigurationError("FixedRelative.alpha must be finite and >= 0")


@dataclass(frozen=True)
class OnRequest:
    """Accuracy on request: the caller names the accuracy, down to ``alpha_floor``."""

    alpha_floor: float

    def __post_init__(self):
        if not (self.alpha_floor >= 0 and np.isfinite(self.alpha_floor)):
            raise ConfigurationError("OnRequest.alpha_floor must be finite and >= 0")


OracleMode = Union[Exact, FixedRelative, OnRequest]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def sample_ball(dimension: int, radius: float, rng: np.random.Generator) -> Vector:
    """Draw uniformly from the closed Euclidean ball of ``radius`` in R^dimension."""
    if radius < 0:
        raise ParameterError("radius must be nonnegative")
    direction = rng.standard_normal(dimension)
    u = rng.random()
    if radius == 0:
        return np.zeros(dimension)
    nrm = euclidean_norm(direction)
    while nrm == 0.0:  # probability zero, but never divide by it
        direction = rng.standard_normal(dimension)
        nrm = euclidean_norm(direction)
    e = direction * (radius * u ** (1.0 / dimension) / nrm)
    # rounding may push the norm a few ulps past the radius
    while euclidean_norm(e) > radius:
        e *= 1.0 - 2.0**-52
    return e


class OracleSample(NamedTuple):
    noisy: Vector
    exact: Vector
    alpha_eff: float


class NoisyOracle:
    """Relative-error gradient oracle; owns its generator, one per run."""

    def __init__(self, objective: Objective, mode: OracleMode, seed: int = 0):
        self.objective = objective
        self.mode = mode
        self.seed = seed
        self.rng = make_rng(seed)
        self.calls = 0

    def effective_alpha(self, requested_alpha: Optional[float] = None) -> float:
        mode = self.mode
        if isinstance(mode, OnRequest):
            if requested_alpha is None:
                raise ConfigurationError("an on-request oracle needs a requested accuracy")
            return max(float(requested_alpha), mode.alpha_floor)
        if requested_alpha is not None:
            raise ConfigurationError(
                f"requested accuracy given to a {type(mode).__name__} oracle"
            )
        if isinstance(mode, FixedRelative):
            return mode.alpha
        return 0.0

    def query(self, x: Vector, requested_alpha: Optional[float] = None) -> OracleSample:
        alpha_eff = self.effective_alpha(requested_alpha)
        grad = np.asarray(self.objective.exact_gradient(x), dtype=np.float64)
        self.calls += 1
        if alpha_eff == 0.0:
            return OracleSample(grad.copy(), grad, 0.0)
        radius = alpha_eff * euclidean_norm(grad)
        return OracleSample(grad + sample_ball(grad.size, radius, self.rng), grad, alpha_eff)


def noisy_gradient(
    oracle: NoisyOracle, x: Vector, requested_alpha: Optional[float] = None
) -> Vector:
    return oracle.query(x, requested_alpha).noisy
