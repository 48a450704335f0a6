"""Command-line harness.

    relgd run <config>        one (alpha, seed) cell: the first of each list
    relgd sweep <config>      every (alpha, seed) cell, summary and curves
    relgd bounds <config>     theoretical bounds for each alpha of the config
    relgd table <preset>      reproduce a packaged table preset

``<config>`` is a JSON file or the name of a packaged preset.  Exit codes:
0 success, 1 invalid config, 2 I/O error, 3 a run diverged or hit the
inner-loop cap (outputs are still written).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from . import theory
from .core import ConfigurationError, ParameterError
from .experiments import (
    ExperimentConfig,
    ExperimentResult,
    fmt,
    load_config,
    preset_names,
    reference_ratio,
    run_experiment,
    validation_message,
    write_outputs,
)
from .solvers import SolverKind

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_RUN_FAILED = 0, 1, 2, 3


def apply_overrides(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    data = cfg.model_dump()
    if args.seed_count is not None:
        data["seeds"] = list(range(args.seed_count))
    if args.iterations is not None:
        data["iterations"] = args.iterations
    if args.solver is not None:
        data["solver"] = args.solver
    return ExperimentConfig.model_validate(data)


def out_dir_for(cfg: ExperimentConfig, args: argparse.Namespace) -> Path:
    if args.out_dir is not None:
        return Path(args.out_dir)
    if cfg.out_dir is not None:
        return Path(cfg.out_dir)
    return Path("out") / cfg.name


def print_sweep(result: ExperimentResult, out=None) -> None:
    out = out or sys.stdout
    ratios = reference_ratio(result)
    ref = result.config.reference or {}
    print(f"{result.config.name}: {result.config.solver.value}, N={result.config.iterations}, "
          f"{len(result.config.seeds)} seed(s)", file=out)
    print(f"{'alpha':>8}  {'median f(x_N)':>14}  {'reference':>10}  {'ratio':>7}", file=out)
    for a, med in result.medians().items():
        r = ratios.get(a)
        refval = next((v for k, v in ref.items() if math.isclose(float(k), a)), None)
        print(f"{a:>8g}  {med:>14.4g}  {'' if refval is None else format(refval, '.3g'):>10}  "
              f"{'' if r is None else format(r, '.3g'):>7}", file=out)
    for c in result.cells:
        if c.failed:
            why = c.error or c.trace.termination.value
            print(f"warning: alpha={c.alpha:g} seed={c.seed}: {why}", file=out)


def bounds_report(cfg: ExperimentConfig) -> list[str]:
    """Bounds for each alpha < 0.5; unknown constants are marked, not guessed."""
    objective = cfg.function.build()
    x0 = cfg.start_point()
    L, mu = objective.L_hint, objective.mu_hint
    gap0 = objective.gap(objective.value(x0))
    eps = cfg.epsilon
    lines = [f"bounds for {cfg.name} ({objective.name}, n={objective.dimension})"]
    lines.append(f"  L = {'L unknown' if L is None else fmt(L)}, "
                 f"mu = {'mu unknown' if mu is None else fmt(mu)}, "
                 f"L_min = {fmt(cfg.L_min)}, alpha_min = {fmt(cfg.alpha_min)}, "
                 f"f(x0) - f* = {'unknown' if gap0 is None else fmt(gap0)}, "
                 f"epsilon = {'not set' if eps is None else fmt(eps)}")
    for a in cfg.alphas:
        lines.append(f"  alpha = {fmt(float(a))}")
        if a >= 0.5:
            lines.append("    no guarantee for alpha >= 0.5")
            continue
        lines.append(f"    xi = {fmt(theory.xi_alg1(a))}")
        if L is None:
            lines.append("    L_max, alpha_max, xi_max, N*, N**, radii: L unknown")
            continue
        a_min = min(cfg.alpha_min, a)
        L1, L2 = theory.l_max_alg1(L), theory.l_max_alg2(L, a, a_min)
        lines.append(f"    L_max (adaptive L) = {fmt(L1)}")
        lines.append(f"    L_max (adaptive L, alpha) = {fmt(L2)}")
        if L >= cfg.L_min:
            a_max = theory.alpha_max_alg2(a, L, cfg.L_min)
            xi_max = theory.xi_alg1(a_max)
            lines.append(f"    alpha_max = {fmt(a_max)}, xi_max = {fmt(xi_max)}")
        else:
            xi_max = None
            lines.append("    alpha_max: L below L_min")
        if mu is None:
            lines.append("    N*, N**, radii, rate factors: mu unknown")
            continue
        xi = theory.xi_alg1(a)
        lines.append(f"    rate factor = {fmt(theory.rate_factor(L1, mu, xi))}, "
                     f"constant-step rate factor = {fmt(theory.constant_rate_factor(L, mu, a))}")
        if gap0 is None:
            continue
        if eps is not None:
            lines.append(f"    N* = {theory.iteration_bound(L1, mu, xi, eps, gap0)}")
            if xi_max is not None:
                lines.append(f"    N** = {theory.iteration_bound(L2, mu, xi_max, eps, gap0)}")
        else:
            lines.append("    N*, N**: epsilon not set")
        lines.append(f"    trajectory radius (adaptive L) = "
                     f"{fmt(theory.trajectory_radius(L1, mu, xi, cfg.L_min, gap0))}")
        if xi_max is not None:
            lines.append(f"    trajectory radius (adaptive L, alpha) = "
                         f"{fmt(theory.trajectory_radius(L2, mu, xi_max, cfg.L_min, gap0))}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relgd", description="Gradient descent with relative-error gradients."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed-count", type=int, help="use seeds 0..N-1")
        p.add_argument("--out-dir", help="directory for CSV output")
        p.add_argument("--iterations", type=int, help="override the iteration budget")
        p.add_argument("--solver", choices=[k.value for k in SolverKind],
                       help="override the solver")

    for name, help_text in (
        ("run", "run the first (alpha, seed) cell of a config"),
        ("sweep", "run every (alpha, seed) cell of a config"),
        ("bounds", "print theoretical bounds for a config"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="JSON config file or preset name")
        common(p)
    p = sub.add_parser("table", help="reproduce a packaged table preset")
    p.add_argument("preset", help="preset name, or 'list'")
    common(p)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "table" and args.preset == "list":
        print("\n".join(preset_names()))
        return EXIT_OK
    source = args.preset if args.command == "table" else args.config
    try:
        cfg = apply_overrides(load_config(source), args)
    except ValidationError as exc:
        print(f"invalid config: {validation_message(exc)}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.command == "bounds":
        try:
            print("\n".join(bounds_report(cfg)))
        except (ParameterError, ConfigurationError) as exc:
            print(f"invalid constants: {exc}", file=sys.stderr)
            return EXIT_INVALID
        return EXIT_OK

    if args.command == "run":
        cfg = cfg.model_copy(update={"alphas": cfg.alphas[:1], "seeds": cfg.seeds[:1]})
    try:
        result = run_experiment(cfg)
    except (ParameterError, ConfigurationError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out_dir = out_dir_for(cfg, args)
    try:
        written = write_outputs(result, out_dir)
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if args.command == "run":
        cell = result.cells[0]
        t = cell.trace
        print(f"{cfg.name}: alpha={cell.alpha:g} seed={cell.seed} iterations={t.iterations} "
              f"f(x_N)={t.final_value:.6g} termination="
              f"{'Diverged' if cell.error else t.termination.value}")
        print(f"trace: {written[0]}")
    else:
        print_sweep(result)
        print(f"wrote {len(written)} files to {out_dir}")
    return EXIT_RUN_FAILED if result.any_failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
