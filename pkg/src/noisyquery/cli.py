"""Command-line interface: bounds, run, sweep, verify.

Data goes to --out or standard output; progress and diagnostics go to
standard error.  Exit codes: 0 success, 2 configuration error,
3 internal invariant or verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bounds import make_bound_report
from .errors import ContractViolation, InvariantError
from .exact_oracle import run_verify_checks
from .harness import (
    ALGORITHMS,
    ExperimentConfig,
    aggregate,
    render_csv,
    render_json,
    run_sweep,
    run_trials,
)

_EXIT_OK = 0
_EXIT_CONFIG = 2
_EXIT_INTERNAL = 3


def _parse_grid_int(text: str) -> list[int]:
    """Comma list ("100,1000") or inclusive range ("100:1000:300")."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ContractViolation(f"range grid must be start:stop:step, got {text!r}")
        start, stop, step = (int(tok) for tok in parts)
        if step <= 0 or stop < start:
            raise ContractViolation(f"bad range grid {text!r}")
        return list(range(start, stop + 1, step))
    return [int(tok) for tok in text.split(",") if tok != ""]


def _parse_grid_float(text: str) -> list[float]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ContractViolation(f"range grid must be start:stop:step, got {text!r}")
        start, stop, step = (float(tok) for tok in parts)
        if step <= 0 or stop < start:
            raise ContractViolation(f"bad range grid {text!r}")
        out = []
        x = start
        while x <= stop + 1e-12:
            out.append(round(x, 12))
            x += step
        return out
    return [float(tok) for tok in text.split(",") if tok != ""]


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _cmd_bounds(args: argparse.Namespace) -> int:
    report = make_bound_report(args.n, args.delta, args.p)
    lines = [
        "# convention: divergences and log(1/delta) in nats; capacity term 1-H(p) uses bits",
        f"n                        {report.n}",
        f"p                        {report.p!r}",
        f"delta                    {report.delta!r}",
        f"d_kl_nats                {report.d_kl!r}",
        f"entropy_nats             {report.entropy_nats!r}",
        f"entropy_bits             {report.entropy_bits!r}",
        f"upper_budget             {report.upper_budget!r}",
        f"lower_budget_lecam       {report.lower_budget!r}",
        f"checkbit_budget_per_bit  {report.checkbit_budget!r}",
        f"lecam_floor_at_m0        {report.lecam_floor(0.0)!r}",
        f"lecam_floor_at_upper     {report.lecam_floor(report.upper_budget)!r}",
        f"regime_ratio             {report.regime_ratio!r}",
        f"regime                   {report.regime}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    config = ExperimentConfig(
        algorithm=args.algorithm,
        instance=args.instance,
        n=args.n,
        p=args.p,
        delta=args.delta,
        trials=args.trials,
        seed=args.seed,
    )
    config.validate()
    print(f"running {config.trials} trials of {config.algorithm} ...", file=sys.stderr)
    trials = run_trials(config, workers=args.workers)
    stats = aggregate(config, trials)
    if args.format == "csv":
        _emit(render_csv([stats]), args.out)
    else:
        _emit(render_json([stats], {0: trials} if args.raw_trials else None), args.out)
    return _EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    base = ExperimentConfig(
        algorithm=args.algorithm,
        instance=args.instance,
        n=1,
        p=0.25,
        delta=0.01,
        trials=args.trials,
        seed=args.seed,
    )
    n_grid = _parse_grid_int(args.n)
    p_grid = _parse_grid_float(args.p)
    delta_grid = _parse_grid_float(args.delta)
    total = len(n_grid) * len(p_grid) * len(delta_grid)
    if total == 0:
        raise ContractViolation("sweep grid is empty")
    print(f"sweeping {total} grid points ...", file=sys.stderr)
    rows = run_sweep(base, n_grid, p_grid, delta_grid, workers=args.workers)
    if args.format == "csv":
        _emit(render_csv(rows), args.out)
    else:
        _emit(render_json(rows), args.out)
    return _EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    checks = run_verify_checks(mc_trials=args.mc_trials)
    width = max(len(name) for name, _, _ in checks)
    failed = 0
    lines = []
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        lines.append(f"{status}  {name:<{width}}  {detail}")
        if not ok:
            failed += 1
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return _EXIT_OK if failed == 0 else _EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisyquery",
        description="Noisy-query OR/MAX simulator: bounds, Monte Carlo campaigns, exact verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="print all closed-form bounds at one parameter point")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--delta", type=float, required=True)
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--out", default=None, help="output path (default: stdout)")
    b.set_defaults(func=_cmd_bounds)

    r = sub.add_parser("run", help="run one Monte Carlo campaign")
    r.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    r.add_argument(
        "--instance",
        required=True,
        help="family[:params], e.g. all_zero, single_one:3, literal:0,1,0, "
        "sorted, relocated:2, permuted:7, literal:1.5,2.5",
    )
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--p", type=float, required=True)
    r.add_argument("--delta", type=float, required=True)
    r.add_argument("--trials", type=int, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", default=None, help="output path (default: stdout)")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--raw-trials", action="store_true", help="include per-trial records (json only)")
    r.add_argument("--workers", type=int, default=1)
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("sweep", help="run a grid of campaigns over n, p, delta")
    s.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    s.add_argument("--instance", required=True)
    s.add_argument("--n", required=True, help="comma list (100,1000) or range start:stop:step")
    s.add_argument("--p", required=True, help="comma list or range")
    s.add_argument("--delta", required=True, help="comma list or range")
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=_cmd_sweep)

    v = sub.add_parser("verify", help="cross-check the exact oracles and enumerable configurations")
    v.add_argument(
        "--mc-trials",
        type=int,
        default=0,
        help="also Monte-Carlo check each enumerable configuration with this many trials",
    )
    v.add_argument("--out", default=None)
    v.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContractViolation as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except InvariantError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return _EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
