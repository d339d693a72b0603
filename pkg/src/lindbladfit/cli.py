"""Command-line surface: simulate, fit, check and bounds.

Exit codes of ``fit`` encode the verdict so shell pipelines can branch
on it: 0 Markov-consistent, 2 non-Markovian, 3 cannot-assess, 1 for
usage, schema or IO problems.  Set LINDBLADFIT_THREADS to parallelize
the branch search.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

import numpy as np

from ._version import __version__
from .bounds import BoundInputs, beta_default, snapshot_error_bound, theta_error_bound
from .channels import gamma_involution, partial_trace_first
from .fileio import (
    SchemaError,
    read_snapshots,
    report_from_fit,
    write_report,
    write_snapshots,
)
from .fitter import (
    VERDICT_CANNOT_ASSESS,
    VERDICT_MARKOVIAN,
    VERDICT_NON_MARKOVIAN,
    FitConfig,
    compute_thetas,
    fit,
    fit_beta_sweep,
)
from .lindblad import gkls_to_transfer, random_gkls
from .simulator import GeneratorTrajectory, NoiseSpec, emit_snapshots

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NON_MARKOVIAN = 2
EXIT_CANNOT_ASSESS = 3

_VERDICT_EXIT = {
    VERDICT_MARKOVIAN: EXIT_OK,
    VERDICT_NON_MARKOVIAN: EXIT_NON_MARKOVIAN,
    VERDICT_CANNOT_ASSESS: EXIT_CANNOT_ASSESS,
}


def _threads() -> int:
    raw = os.environ.get("LINDBLADFIT_THREADS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        return 1


def _parse_sweep(spec: str) -> list[float]:
    """Parse lo:hi:steps into a geometric grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected lo:hi:steps")
    lo, hi = float(parts[0]), float(parts[1])
    steps = int(parts[2])
    if lo <= 0 or hi < lo or steps < 2:
        raise argparse.ArgumentTypeError("need 0 < lo <= hi and steps >= 2")
    return list(np.geomspace(lo, hi, steps))


def cmd_fit(args: argparse.Namespace) -> int:
    try:
        series = read_snapshots(args.input)
    except (OSError, SchemaError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE

    cfg = FitConfig(
        m_max=args.m_max,
        beta=args.beta,
        markov_threshold=args.threshold,
        tol=args.tol,
        max_iters=args.max_iters,
        threads=_threads(),
    )

    beta_sweep_block = None
    if args.beta_sweep is not None:
        sweep = fit_beta_sweep(series, cfg, args.beta_sweep)
        beta_sweep_block = [
            (beta, result.total_distance, result.verdict) for beta, result in sweep
        ]
        best_beta, result = min(
            sweep, key=lambda item: (item[1].total_distance, item[0])
        )
        cfg = replace(cfg, beta=best_beta)
    else:
        result = fit(series, cfg)

    bounds_block = None
    if args.eta is not None:
        if series.timestamps is not None:
            inputs = BoundInputs(
                eta=args.eta,
                t_total=series.timestamps[-1],
                n_snapshots=len(series),
                dim=series.dim,
                magnus_remainder=args.magnus,
            )
            bounds_block = {
                "eta": args.eta,
                "theta_error_bound": theta_error_bound(inputs),
                "snapshot_error_bound": snapshot_error_bound(inputs),
                "beta_default": beta_default(inputs),
            }
        else:
            print(
                "note: --eta given but the file has no timestamps; "
                "skipping bound comparisons",
                file=sys.stderr,
            )

    payload = report_from_fit(result, cfg, bounds_block, beta_sweep_block)
    try:
        write_report(args.out, payload)
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    print(f"verdict: {result.verdict}  total_distance: {result.total_distance:.6g}")
    return _VERDICT_EXIT[result.verdict]


def _build_trajectory(args: argparse.Namespace) -> GeneratorTrajectory:
    rng = np.random.default_rng(args.seed)

    def one_generator(scale: float = 1.0) -> np.ndarray:
        params = random_gkls(args.d, args.jumps, args.rate_scale, rng)
        return scale * gkls_to_transfer(params)

    if args.kind == "constant":
        return GeneratorTrajectory.constant(one_generator(), t_total=args.T)
    if args.kind == "linear":
        if args.eta is not None:
            # exact Lipschitz constant: ramp a normalized generator from zero
            end = one_generator()
            end *= args.eta * args.T / np.linalg.norm(end)
            start = np.zeros_like(end)
        else:
            start, end = one_generator(), one_generator()
        return GeneratorTrajectory.linear(start, end, args.T)
    segments = max(args.segments, 1)
    breakpoints = tuple(np.linspace(0.0, args.T, segments + 1))
    generators = tuple(one_generator() for _ in range(segments))
    return GeneratorTrajectory.piecewise(breakpoints, generators)


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        trajectory = _build_trajectory(args)
        noise = NoiseSpec(
            scale=args.noise_sigma,
            mode="additive-entrywise" if args.noise_sigma > 0 else "none",
            seed=args.seed,
        )
        series = emit_snapshots(trajectory, args.N, args.T, args.dt, noise)
        write_snapshots(args.out, series)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {len(series)} snapshots (d={series.dim}) to {args.out}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    try:
        series = read_snapshots(args.input)
    except (OSError, SchemaError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    d = series.dim
    eye = np.eye(d)
    rows = []
    for index, snapshot in enumerate(series.snapshots):
        choi = gamma_involution(snapshot, d)
        hermiticity = float(np.linalg.norm(choi - choi.conj().T))
        hermitian_part = (choi + choi.conj().T) / 2
        cp_min = float(np.linalg.eigvalsh(hermitian_part)[0])
        tp_residual = float(np.abs(partial_trace_first(choi, d) - eye).sum())
        rows.append((f"M_{index + 1}", hermiticity, cp_min, tp_residual))
    thetas = compute_thetas(series)
    for index, theta in enumerate(thetas[1:], start=2):
        if theta is None:
            rows.append((f"Theta_{index}", math.nan, math.nan, math.nan))
            continue
        choi = gamma_involution(theta, d)
        hermiticity = float(np.linalg.norm(choi - choi.conj().T))
        hermitian_part = (choi + choi.conj().T) / 2
        cp_min = float(np.linalg.eigvalsh(hermitian_part)[0])
        tp_residual = float(np.abs(partial_trace_first(choi, d) - eye).sum())
        rows.append((f"Theta_{index}", hermiticity, cp_min, tp_residual))
    print(f"{'map':>10}  {'hermiticity':>12}  {'cp_min_eig':>12}  {'tp_residual':>12}")
    for name, hermiticity, cp_min, tp_residual in rows:
        print(f"{name:>10}  {hermiticity:12.4e}  {cp_min:12.4e}  {tp_residual:12.4e}")
    if args.out is not None:
        payload = {
            "format_version": "1",
            "tool": {"name": "lindbladfit", "version": __version__},
            "checks": [
                {
                    "map": name,
                    "hermiticity_residual": None if math.isnan(h) else h,
                    "cp_min_eigenvalue": None if math.isnan(c) else c,
                    "tp_residual": None if math.isnan(t) else t,
                }
                for name, h, c, t in rows
            ],
        }
        write_report(args.out, payload)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    try:
        inputs = BoundInputs(
            eta=args.eta,
            t_total=args.T,
            n_snapshots=args.N,
            dim=args.d,
            magnus_remainder=args.magnus,
        )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    print(f"theta_error_bound    {theta_error_bound(inputs):.6e}")
    print(f"snapshot_error_bound {snapshot_error_bound(inputs):.6e}")
    print(f"beta_default         {beta_default(inputs):.6e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindbladfit",
        description=(
            "Fit time-dependent Markovian generators to tomographic channel "
            "snapshots, or flag the series as non-Markovian."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a snapshot file, write a report")
    p_fit.add_argument("input", help="snapshot JSON file")
    p_fit.add_argument("--out", required=True, help="report output path")
    p_fit.add_argument("--m-max", dest="m_max", type=int, default=1)
    p_fit.add_argument("--beta", type=float, default=1.0)
    p_fit.add_argument(
        "--beta-sweep",
        dest="beta_sweep",
        type=_parse_sweep,
        default=None,
        metavar="LO:HI:STEPS",
        help="geometric grid of beta values; the report keeps the best",
    )
    p_fit.add_argument("--threshold", type=float, default=None)
    p_fit.add_argument("--tol", type=float, default=1e-9)
    p_fit.add_argument("--max-iters", dest="max_iters", type=int, default=50_000)
    p_fit.add_argument("--eta", type=float, default=None,
                       help="Lipschitz constant for bound comparisons")
    p_fit.add_argument("--magnus", type=float, default=0.0,
                       help="per-interval Magnus remainder for beta_default")
    p_fit.set_defaults(func=cmd_fit)

    p_sim = sub.add_parser("simulate", help="generate a snapshot file")
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--d", type=int, default=2)
    p_sim.add_argument(
        "--kind", choices=("constant", "linear", "piecewise"), default="linear"
    )
    p_sim.add_argument("--N", type=int, default=8, help="number of snapshots")
    p_sim.add_argument("--T", type=float, default=1.0, help="total run time")
    p_sim.add_argument("--dt", type=float, default=None, help="propagation step")
    p_sim.add_argument("--eta", type=float, default=None,
                       help="exact Lipschitz constant (linear kind only)")
    p_sim.add_argument("--noise-sigma", dest="noise_sigma", type=float, default=0.0)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--jumps", type=int, default=1)
    p_sim.add_argument("--rate-scale", dest="rate_scale", type=float, default=0.5)
    p_sim.add_argument("--segments", type=int, default=2,
                       help="segment count for the piecewise kind")
    p_sim.set_defaults(func=cmd_simulate)

    p_check = sub.add_parser(
        "check", help="report CPT and divisibility residuals of a snapshot file"
    )
    p_check.add_argument("input")
    p_check.add_argument("--out", default=None, help="optional JSON output")
    p_check.set_defaults(func=cmd_check)

    p_bounds = sub.add_parser("bounds", help="print the error-bound table")
    p_bounds.add_argument("--eta", type=float, required=True)
    p_bounds.add_argument("--T", type=float, required=True)
    p_bounds.add_argument("--N", type=int, required=True)
    p_bounds.add_argument("--d", type=int, required=True)
    p_bounds.add_argument("--magnus", type=float, default=0.0)
    p_bounds.set_defaults(func=cmd_bounds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
