"""Command-line interface: solve / compare / reference / list.

Exit codes: 0 success, 2 configuration error, 3 iteration budget
exhausted before reaching the target accuracy, 4 file parse error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import harness
from .harness import (
    ALGORITHMS,
    PROBLEM_DEFAULTS,
    ConfigError,
    DatasetFormatError,
    PgmFormatError,
    RunConfig,
    StaleReferenceError,
)
from .restart import EXIT_BUDGET

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET_CODE = 3
EXIT_PARSE = 4


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="run configuration file (key = value sections)")
    p.add_argument("--problem", help="problem name (see 'list')")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                   help="problem parameter override (repeatable)")
    p.add_argument("--rho", type=float, help="backtracking shrink factor in (0,1)")
    p.add_argument("--delta", type=float, help="step enlargement factor in (0,1]")
    p.add_argument("--eps", type=float, help="target gradient-mapping norm")
    p.add_argument("--lmin", type=float, help="lower bound for step Lipschitz estimates")
    p.add_argument("--l0", type=float, help="initial Lipschitz estimate (default: problem hint)")
    p.add_argument("--C", dest="C", type=float, help="doubling constant (> 4/sqrt(rho))")
    p.add_argument("--seed", type=int, help="instance / starting-point seed")
    p.add_argument("--max-iters", type=int, help="inner iteration budget")


def _merge_cli(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    params = dict(cfg.problem_params)
    for item in args.param:
        if "=" not in item:
            raise ConfigError(f"--param expects KEY=VALUE, got {item!r}")
        k, _, v = item.partition("=")
        params[k.strip()] = v.strip()
    updates = {"problem_params": params}
    for attr, name in (
        ("problem", "problem"), ("rho", "rho"), ("delta", "delta"), ("eps", "eps"),
        ("lmin", "lmin"), ("l0", "l0"), ("C", "C"), ("seed", "seed"),
        ("max_iters", "max_iters"),
    ):
        val = getattr(args, name, None)
        if val is not None:
            updates[attr] = val
    return replace(cfg, **updates)


def _load_base_config(args: argparse.Namespace) -> RunConfig:
    if getattr(args, "config", None):
        return harness.load_config_file(args.config)
    return RunConfig()


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = _merge_cli(_load_base_config(args), args)
    if args.algo is not None:
        cfg.algo = args.algo
    if args.trace is not None:
        cfg.trace_path = args.trace
    if args.report is not None:
        cfg.report_path = args.report
    report = harness.run(cfg)
    print(f"{report.algo} on {cfg.problem}: exit={report.exit} "
          f"iters={report.total_inner_iterations} backtracks={report.total_backtracks}")
    return EXIT_BUDGET_CODE if report.exit == EXIT_BUDGET else EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _merge_cli(_load_base_config(args), args)
    reports = harness.compare(cfg, args.out_dir)
    worst = EXIT_OK
    for algo, rep in reports.items():
        hit = harness.iterations_to_eps(rep.trace, cfg.eps)
        print(f"{algo}: exit={rep.exit} iters_to_eps={hit if hit is not None else 'not reached'}")
        if rep.exit == EXIT_BUDGET:
            worst = EXIT_BUDGET_CODE
    print(f"traces written to {args.out_dir}")
    return worst


def cmd_reference(args: argparse.Namespace) -> int:
    cfg = _merge_cli(_load_base_config(args), args)
    prob, x0 = harness.build_problem(cfg.problem, cfg.problem_params, cfg.seed)
    F_hat, _ = harness.compute_reference(prob, x0, args.budget, rho=cfg.rho, delta=cfg.delta,
                                         L0=cfg.l0)
    dist0 = None
    if prob.ground_truth is not None:
        dist0 = float(np.linalg.norm(x0 - prob.ground_truth.x_star))
    harness.write_reference(args.out, prob, F_hat, args.budget, cfg.seed,
                            L_hat=prob.lipschitz_hint, dist0=dist0)
    print(f"reference for {prob.key}: F_hat={F_hat:.12g} -> {args.out}")
    return EXIT_OK


def cmd_list(_args: argparse.Namespace) -> int:
    print("problems:")
    for name, defaults in PROBLEM_DEFAULTS.items():
        pretty = ", ".join(f"{k}={v}" for k, v in defaults.items())
        print(f"  {name} ({pretty})")
    print("algorithms:")
    for algo in ALGORITHMS:
        print(f"  {algo}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freefista",
                                     description="composite-optimization solvers and benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one algorithm on one problem")
    _add_common_flags(p_solve)
    p_solve.add_argument("--algo", choices=ALGORITHMS, help="algorithm name")
    p_solve.add_argument("--trace", help="write the per-iteration CSV here")
    p_solve.add_argument("--report", help="write the run summary here")
    p_solve.set_defaults(fn=cmd_solve)

    p_cmp = sub.add_parser("compare", help="run all four algorithms on one problem")
    _add_common_flags(p_cmp)
    p_cmp.add_argument("--out-dir", required=True, help="directory for per-algorithm CSVs")
    p_cmp.set_defaults(fn=cmd_compare)

    p_ref = sub.add_parser("reference", help="precompute a reference optimal value")
    _add_common_flags(p_ref)
    p_ref.add_argument("--budget", type=int, default=200_000, help="iteration budget")
    p_ref.add_argument("--out", required=True, help="reference file path")
    p_ref.set_defaults(fn=cmd_reference)

    p_list = sub.add_parser("list", help="list problems and algorithms")
    p_list.set_defaults(fn=cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (DatasetFormatError, PgmFormatError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StaleReferenceError as exc:
        print(f"stale reference: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
