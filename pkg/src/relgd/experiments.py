"""Experiment configs, alpha sweeps and CSV output."""

from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .core import (
    UINT64_MAX,
    ConfigurationError,
    DivergenceError,
    Objective,
    RunTrace,
    SolverConfig,
    Termination,
)
from .noise import RNG_ALGORITHM, Exact, FixedRelative, NoisyOracle, OnRequest
from .solvers import SolverKind, acceptance_test_count, run_constant_step, run_solver
from .testbed import nesterov_skokov_objective, quadratic_objective, rosenbrock_objective

TRACE_COLUMNS = (
    "k", "f", "gap", "exact_grad_norm", "noisy_grad_norm",
    "L_k", "alpha_k", "step_size", "inner_repeats", "dist_from_x0",
)
SUMMARY_COLUMNS = (
    "alpha", "seed", "f_final", "gap_final", "iterations", "termination", "acceptance_tests",
)
X0_PRESETS = ("zeros", "ones", "minus_one_first")


class FunctionSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["rosenbrock", "nesterov_skokov", "quadratic"]
    n: Optional[int] = Field(default=None, ge=2)
    eigenvalues: Optional[list[float]] = None
    shift: Optional[list[float]] = None

    @model_validator(mode="after")
    def _complete(self):
        if self.kind == "nesterov_skokov" and self.n is None:
            self.n = 100
        if self.kind == "quadratic":
            if not self.eigenvalues or min(self.eigenvalues) <= 0:
                raise ValueError("quadratic needs positive eigenvalues")
            if self.shift is not None and len(self.shift) != len(self.eigenvalues):
                raise ValueError("shift and eigenvalues differ in length")
        return self

    @property
    def dimension(self) -> int:
        if self.kind == "rosenbrock":
            return 2
        if self.kind == "nesterov_skokov":
            return self.n
        return len(self.eigenvalues)

    def build(self) -> Objective:
        if self.kind == "rosenbrock":
            return rosenbrock_objective()
        if self.kind == "nesterov_skokov":
            return nesterov_skokov_objective(self.n)
        return quadratic_objective(self.eigenvalues, self.shift)


class ExperimentConfig(BaseModel):
    """One experiment: a function, a solver and a grid of (alpha, seed) cells.

    ``alphas`` are the true oracle noise levels.  ``alpha`` is the level the
    adaptive-L and constant-step solvers assume; when omitted each cell
    assumes its own oracle level.  ``on_request`` runs the L-and-alpha
    method against an accuracy-on-request oracle whose floor is the cell's
    alpha.
    """

    model_config = ConfigDict(extra="forbid")

    name: str = "experiment"
    function: FunctionSpec
    solver: SolverKind = SolverKind.ADAPTIVE_L_ALPHA
    x0: Union[list[float], Literal["zeros", "ones", "minus_one_first"]] = "zeros"
    alphas: list[float] = Field(min_length=1)
    L_min: float = Field(default=0.01, gt=0)
    L_0: float = Field(default=1.0, gt=0)
    alpha_min: float = Field(default=0.001, ge=0, lt=0.5)
    alpha_0: float = Field(default=0.01, ge=0, lt=0.5)
    alpha: Optional[float] = Field(default=None, ge=0, lt=0.5)
    L: Optional[float] = Field(default=None, gt=0)
    epsilon: Optional[float] = Field(default=None, gt=0)
    iterations: int = Field(default=1000, ge=1)
    seeds: list[int] = Field(default_factory=lambda: list(range(11)), min_length=1)
    max_inner_repeats: int = Field(default=60, ge=1)
    on_request: bool = False
    out_dir: Optional[str] = None
    reference: Optional[dict[str, float]] = None

    @field_validator("alphas")
    @classmethod
    def _alphas_valid(cls, v):
        if any(not (a >= 0 and math.isfinite(a)) for a in v):
            raise ValueError("every alpha must be finite and >= 0")
        return v

    @field_validator("seeds")
    @classmethod
    def _seeds_valid(cls, v):
        if any(not 0 <= s <= UINT64_MAX for s in v):
            raise ValueError("seeds must be unsigned 64-bit integers")
        return v

    @model_validator(mode="after")
    def _consistent(self):
        if self.L_0 < self.L_min:
            raise ValueError("L_0 must be at least L_min")
        if self.alpha_0 < self.alpha_min:
            raise ValueError("alpha_0 must be at least alpha_min")
        if isinstance(self.x0, list) and len(self.x0) != self.function.dimension:
            raise ValueError(f"x0 must have length {self.function.dimension}")
        if self.solver is SolverKind.ADAPTIVE_L and self.alpha is None:
            if any(a >= 0.5 for a in self.alphas):
                raise ValueError("adaptive_L needs 'alpha' < 0.5 when some alphas are >= 0.5")
        if self.solver is SolverKind.CONSTANT_STEP:
            if self.L is None and self.function.kind != "quadratic":
                raise ValueError("constant_step needs 'L' unless the function is quadratic")
            if self.alpha is None and any(a >= 1 for a in self.alphas):
                raise ValueError("constant_step needs alphas < 1 or an explicit 'alpha'")
        if self.on_request:
            if self.solver is not SolverKind.ADAPTIVE_L_ALPHA:
                raise ValueError("on_request applies to adaptive_L_alpha only")
            if any(a >= 0.5 for a in self.alphas):
                raise ValueError("on_request oracles need alphas < 0.5")
        return self

    def start_point(self) -> np.ndarray:
        n = self.function.dimension
        if isinstance(self.x0, list):
            return np.array(self.x0, dtype=np.float64)
        if self.x0 == "zeros":
            return np.zeros(n)
        x = np.ones(n)
        if self.x0 == "minus_one_first":
            x[0] = -1.0
        return x

    def solver_config(self, alpha: float, seed: int) -> SolverConfig:
        return SolverConfig(
            L_min=self.L_min,
            L_0=self.L_0,
            alpha=self.assumed_alpha(alpha) if self.solver is SolverKind.ADAPTIVE_L else 0.0,
            alpha_min=self.alpha_min,
            alpha_0=self.alpha_0,
            epsilon=self.epsilon,
            max_iterations=self.iterations,
            max_inner_repeats=self.max_inner_repeats,
            seed=seed,
        )

    def assumed_alpha(self, alpha: float) -> float:
        return alpha if self.alpha is None else self.alpha


def load_config(source: Union[str, Path]) -> ExperimentConfig:
    """Read a JSON config file, or a packaged preset by name."""
    path = Path(source)
    if path.is_file():
        text = path.read_text()
    else:
        text = preset_text(str(source))
    return ExperimentConfig.model_validate_json(text)


def preset_names() -> list[str]:
    files = resources.files("relgd").joinpath("presets").iterdir()
    return sorted(f.name[:-5] for f in files if f.name.endswith(".json"))


def preset_text(name: str) -> str:
    ref = resources.files("relgd").joinpath("presets", f"{name}.json")
    if not ref.is_file():
        raise FileNotFoundError(
            f"no config file or preset named {name!r}; presets: {', '.join(preset_names())}"
        )
    return ref.read_text()


@dataclass
class CellResult:
    alpha: float
    seed: int
    trace: RunTrace
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None or self.trace.termination is Termination.INNER_CAP


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    cells: list[CellResult]

    @property
    def any_failed(self) -> bool:
        return any(c.failed for c in self.cells)

    def medians(self) -> dict[float, float]:
        out = {}
        for a in self.config.alphas:
            out[a] = statistics.median(c.trace.final_value for c in self.cells if c.alpha == a)
        return out


def run_cell(config: ExperimentConfig, alpha: float, seed: int) -> CellResult:
    objective = config.function.build()
    if config.on_request:
        mode = OnRequest(alpha)
    elif alpha == 0:
        mode = Exact()
    else:
        mode = FixedRelative(alpha)
    oracle = NoisyOracle(objective, mode, seed)
    solver_cfg = config.solver_config(alpha, seed)
    x0 = config.start_point()
    try:
        if config.solver is SolverKind.CONSTANT_STEP:
            L = config.L if config.L is not None else objective.L_hint
            trace = run_constant_step(
                objective, oracle, x0, L, config.assumed_alpha(alpha), solver_cfg
            )
        else:
            trace = run_solver(
                config.solver, objective, oracle, x0, solver_cfg, on_request=config.on_request
            )
    except DivergenceError as exc:
        return CellResult(alpha, seed, exc.trace, str(exc))
    return CellResult(alpha, seed, trace)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    cells = [run_cell(config, a, s) for a in config.alphas for s in config.seeds]
    return ExperimentResult(config, cells)


def fmt(value) -> str:
    """Shortest round-trip text for floats, blank for missing values."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def trace_rows(trace: RunTrace) -> list[list[str]]:
    rows = [
        [fmt(getattr(r, name)) for name in (
            "k", "f_value", "gap", "exact_grad_norm", "noisy_grad_norm",
            "L_k", "alpha_k", "step_size", "inner_repeats", "dist_from_x0",
        )]
        for r in trace.records
    ]
    if trace.final_point is not None:
        dist = float(np.linalg.norm(trace.final_point - trace.x0))
        rows.append([
            fmt(len(trace.records)), fmt(float(trace.final_value)), fmt(trace.final_gap),
            fmt(float(trace.final_exact_grad_norm)), "", "", "", "", "", fmt(dist),
        ])
    return rows


def write_trace_csv(trace: RunTrace, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        writer.writerows(trace_rows(trace))


def trace_filename(name: str, alpha: float, seed: int) -> str:
    return f"{name}_alpha={fmt(float(alpha))}_seed={seed}.csv"


def summary_rows(result: ExperimentResult) -> list[list[str]]:
    rows = []
    for c in result.cells:
        t = c.trace
        rows.append([
            fmt(float(c.alpha)), fmt(c.seed), fmt(float(t.final_value)), fmt(t.final_gap),
            fmt(t.iterations),
            "Diverged" if c.error else t.termination.value,
            fmt(acceptance_test_count(t)),
        ])
    for a, med in result.medians().items():
        rows.append([fmt(float(a)), "median", fmt(float(med)), "", "", "", ""])
    return rows


def curve_rows(result: ExperimentResult) -> list[list[str]]:
    """Median f(x^k) over seeds for each alpha; short runs hold their last value."""
    columns = []
    for a in result.config.alphas:
        series = [c.trace.values() for c in result.cells if c.alpha == a]
        length = max(len(s) for s in series)
        padded = np.array([np.pad(s, (0, length - len(s)), mode="edge") for s in series])
        columns.append(np.median(padded, axis=0))
    length = max(len(col) for col in columns)
    rows = []
    for k in range(length):
        rows.append([fmt(k)] + [fmt(float(col[k])) if k < len(col) else "" for col in columns])
    return rows


def write_outputs(result: ExperimentResult, out_dir: Path) -> list[Path]:
    cfg = result.config
    trace_dir = out_dir / "traces"
    trace_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for c in result.cells:
        path = trace_dir / trace_filename(cfg.name, c.alpha, c.seed)
        write_trace_csv(c.trace, path)
        written.append(path)
    summary = out_dir / "summary.csv"
    with open(summary, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerows(summary_rows(result))
    curves = out_dir / "curves.csv"
    with open(curves, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k"] + [f"alpha={fmt(float(a))}" for a in cfg.alphas])
        writer.writerows(curve_rows(result))
    meta = out_dir / "run_meta.json"
    meta.write_text(
        json.dumps(
            {"rng": RNG_ALGORITHM, "config": json.loads(cfg.model_dump_json())},
            indent=2, sort_keys=True,
        )
        + "\n"
    )
    return written + [summary, curves, meta]


def reference_ratio(result: ExperimentResult) -> dict[float, Optional[float]]:
    """Median f over the reference value for each alpha with a reference."""
    ref = result.config.reference or {}
    out = {}
    for a, med in result.medians().items():
        key = next((k for k in ref if math.isclose(float(k), a)), None)
        out[a] = None if key is None else med / ref[key]
    return out


def validation_message(exc: Exception) -> str:
    if hasattr(exc, "errors"):
        parts = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<config>"
            parts.append(f"{loc}: {err['msg']}")
        return "; ".join(parts)
    return str(exc)


__all__ = [
    "ConfigurationError",
    "ExperimentConfig",
    "ExperimentResult",
    "FunctionSpec",
    "X0_PRESETS",
    "load_config",
    "run_cell",
    "run_experiment",
    "write_outputs",
]
