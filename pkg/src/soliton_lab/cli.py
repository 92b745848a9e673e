"""Command-line interface.

Subcommands: solve, verify, asymptotics, scan-gradient, table.  Exit codes:
0 success (and, for verify, every check passed), 1 verify ran but at least
one check failed, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .asymptotics import fit_far_field
from .model import validate_params
from .output import emit_report, profile_document, scan_document, table_document
from .profile import SolverError, solve_profile
from .verify import default_scan_geometry, run_battery, scan_gradient_bound

__all__ = ["RunConfig", "run_cli", "main"]

TABLE_DIMENSIONS = (2, 3, 4, 5, 6)
TABLE_EXPONENTS = (0.5, 1.0, 2.0, 3.0)


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: command plus the shared numeric flags."""

    command: str
    n: int | None
    alpha: float | None
    t_max: float
    tol: float
    output_path: str | None
    format: str


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soliton-lab",
        description="Radial translator profiles: solve, verify, fit, scan.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_params=True):
        if with_params:
            p.add_argument("--n", type=int, required=True, help="ambient dimension (>= 2)")
            p.add_argument("--alpha", type=float, required=True, help="speed exponent (> 0)")
        p.add_argument("--tmax", type=float, default=200.0, help="outer radius (default 200)")
        p.add_argument("--tol", type=float, default=1e-10, help="accuracy target (default 1e-10)")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        p.add_argument(
            "--format", type=str, choices=("csv", "json"), default="csv",
            help="output format (default csv)",
        )

    add_common(sub.add_parser("solve", help="solve one profile and emit t,r,dr,ddr"))
    add_common(sub.add_parser("verify", help="run the verification battery plus a far-field fit"))
    add_common(sub.add_parser("asymptotics", help="fit the far-field expansion only"))
    add_common(sub.add_parser("scan-gradient", help="scan the interior gradient bound"))
    add_common(sub.add_parser("table", help="summary table over the (n, alpha) grid"), with_params=False)
    return parser


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        alpha=getattr(args, "alpha", None),
        t_max=args.tmax,
        tol=args.tol,
        output_path=args.out,
        format=args.format,
    )


def _table_cell(n: int, alpha: float, t_max: float, tol: float) -> dict:
    params = validate_params(n, alpha)
    profile = solve_profile(params, t_max, tol)
    fit = fit_far_field(profile)
    from .asymptotics import expected_coefficients

    expected_leading, expected_second = expected_coefficients(params)
    return {
        "n": n,
        "alpha": alpha,
        "fitted_leading": fit.fitted_leading,
        "expected_leading": expected_leading,
        "fitted_second": fit.fitted_second,
        "expected_second": expected_second,
        "fitted_C1": fit.fitted_C1,
        "residual_norm": fit.residual_norm,
    }


def _run_table(config: RunConfig) -> int:
    cells = [(n, a) for n in TABLE_DIMENSIONS for a in TABLE_EXPONENTS]
    workers = 1
    env = os.environ.get("SOLITON_LAB_THREADS")
    if env:
        try:
            workers = max(1, int(env))
        except ValueError:
            raise ValueError(f"SOLITON_LAB_THREADS must be an integer, got {env!r}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(cells))) as pool:
            rows = list(
                pool.map(lambda cell: _table_cell(*cell, config.t_max, config.tol), cells)
            )
    else:
        rows = [_table_cell(n, a, config.t_max, config.tol) for n, a in cells]
    rows.sort(key=lambda row: (row["n"], row["alpha"]))
    _write(table_document(rows, config.format), config.output_path)
    return 0


def _dispatch(config: RunConfig) -> int:
    if config.command == "table":
        return _run_table(config)

    params = validate_params(config.n, config.alpha)
    if config.command == "solve":
        profile = solve_profile(params, config.t_max, config.tol)
        _write(profile_document(profile, config.format), config.output_path)
        return 0
    if config.command == "verify":
        profile = solve_profile(params, config.t_max, config.tol)
        reports = run_battery(profile)
        fit = fit_far_field(profile)
        _write(emit_report(reports, fit, config.format), config.output_path)
        return 0 if all(c.passed for c in reports) else 1
    if config.command == "asymptotics":
        profile = solve_profile(params, config.t_max, config.tol)
        fit = fit_far_field(profile)
        _write(emit_report([], fit, config.format), config.output_path)
        return 0
    if config.command == "scan-gradient":
        centers, radii = default_scan_geometry(config.t_max)
        report = scan_gradient_bound(params, centers, radii, config.tol)
        _write(scan_document(report, config.format), config.output_path)
        return 0
    raise ValueError(f"unknown command {config.command!r}")


def run_cli(argv: list[str] | None = None) -> int:
    """Parse arguments and run; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass it through.
        code = exc.code
        return int(code) if code is not None else 0
    config = _config_from_args(args)
    try:
        return _dispatch(config)
    except (ValueError, SolverError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
