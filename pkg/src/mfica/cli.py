"""Command-line interface for mfica."""

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

from . import __version__
from .basis import BasisSpec, fit_coefficients, fourier_basis, underdetermined_cells
from .estimator import FunctionalICA, IcaConfig
from .evaluation import block_collapse, loadings_table, minimum_distance_index, select_scores
from .exceptions import InputError, NumericalError
from .ica import component_scores
from .sim import env_seed, env_workers, load_study_config, full_grid, run_study, summarize_study
from .sim.runner import RESULT_COLUMNS
from .utils.reporting import StudyLogger
from .utils.serialization import (
    read_basis_json,
    read_coefficients_csv,
    read_curves_csv,
    read_matrix_csv,
    read_model_json,
    write_basis_json,
    write_coefficients_csv,
    write_model_json,
    write_scores_csv,
    write_table_csv,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2
EXIT_INTERRUPTED = 130


def _input_path(path: Optional[str], flag: str = "--input") -> Path:
    if not path:
        raise InputError(f"{flag} is required")
    resolved = Path(path)
    if not resolved.is_file():
        raise InputError(f"{flag}: file not found: {resolved}")
    return resolved


def _output_dir(path: str) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise InputError(f"--output-dir: cannot create {out}: {e.strerror}")
    if not os.access(out, os.W_OK):
        raise InputError(f"--output-dir: {out} is not writable")
    return out


def fit_command(args) -> int:
    """Fit basis coefficients to long-format curves."""
    source = _input_path(args.input)
    out = _output_dir(args.output_dir)
    basis = fourier_basis(args.basis_k, tuple(args.interval))
    curves = read_curves_csv(source)
    short = underdetermined_cells(curves, basis.K)
    if short:
        listed = "; ".join(f"{obs} component {j}" for obs, j in short[:20])
        more = f" (and {len(short) - 20} more)" if len(short) > 20 else ""
        raise InputError(f"{len(short)} cell(s) have fewer than K={basis.K} points: {listed}{more}")
    coefs = fit_coefficients(curves, basis, ridge=args.ridge)
    write_coefficients_csv(coefs, out / "coefficients.csv")
    write_basis_json(basis, out / "basis.json")
    if args.verbose:
        print(f"✅ Fitted {coefs.n} observations x {coefs.p} components (K={basis.K})")
        print(f"   Wrote {out / 'coefficients.csv'} and {out / 'basis.json'}")
    return EXIT_OK


def _load_basis(path: Optional[str], K: int) -> Optional[BasisSpec]:
    if not path:
        return None
    basis = read_basis_json(_input_path(path, "--basis"))
    if basis.K != K:
        raise InputError(f"--basis has K={basis.K} but the coefficients have K={K}")
    return basis


def ica_command(args) -> int:
    """Fit FPCA, whitening and a rotation; write the model and its loadings."""
    source = _input_path(args.input)
    out = _output_dir(args.output_dir)
    coefs = read_coefficients_csv(source, K=args.basis_k)
    basis = _load_basis(args.basis, coefs.K)
    interval = basis.interval if basis is not None else (0.0, 1.0)
    config = IcaConfig(
        basis_k=coefs.K,
        interval=interval,
        d=args.d,
        method=args.method,
        verbose=args.verbose,
    )
    estimator = FunctionalICA(config)
    scores = estimator.fit_transform(coefs)
    model = estimator.model_
    if basis is None:
        # interval unknown without --basis
        model = replace(model, fpca=replace(model.fpca, basis=None))
    write_model_json(model, out / "model.json")
    write_table_csv(loadings_table(model), out / "loadings.csv")
    write_scores_csv(scores, out / "scores.csv")
    if args.verbose:
        print(f"   Wrote model.json, loadings.csv and scores.csv to {out}")
    return EXIT_OK


def scores_command(args) -> int:
    """Apply a saved model to a coefficient file."""
    source = _input_path(args.input)
    model = read_model_json(_input_path(args.model, "--model"))
    out = _output_dir(args.output_dir)
    coefs = read_coefficients_csv(source, K=model.fpca.K)
    scores = component_scores(coefs, model)
    if args.select is not None:
        scores = select_scores(scores, args.select, rule=args.rule)
    write_scores_csv(scores, out / "scores.csv")
    if args.verbose:
        print(f"✅ Wrote {scores.n} x {scores.d} scores to {out / 'scores.csv'}")
    return EXIT_OK


def simulate_command(args) -> int:
    """Run the Monte-Carlo mixing study."""
    out = _output_dir(args.output_dir)
    seed = env_seed() if args.seed is None else args.seed
    workers = env_workers() if args.workers is None else args.workers
    if args.config:
        grid = load_study_config(
            _input_path(args.config, "--config"), seed=seed, replications=args.replications
        )
    else:
        grid = full_grid(
            replications=100 if args.replications is None else args.replications, seed=seed
        )

    result = run_study(grid, parallelism=workers, verbose=args.verbose)
    summary = summarize_study(result.table)
    write_table_csv(result.table[RESULT_COLUMNS], out / "results.csv")
    write_table_csv(summary, out / "summary.csv")
    if not result.failures.empty:
        write_table_csv(result.failures, out / "failures.csv")
    if args.verbose:
        StudyLogger.log_summary(summary)
        print(f"⏱️  {result.elapsed:.1f} s; wrote results.csv and summary.csv to {out}")
    if not result.ok:
        print(f"❌ {len(result.failures)} replication(s) failed; see failures.csv", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def mdi_command(args) -> int:
    """Minimum distance index of a square matrix, or of a collapsed d x pK gain matrix."""
    matrix = read_matrix_csv(_input_path(args.input))
    if args.basis_k is not None:
        if matrix.shape[1] % args.basis_k:
            raise InputError(
                f"gain has {matrix.shape[1]} columns, not a multiple of K={args.basis_k}"
            )
        matrix = block_collapse(matrix, matrix.shape[1] // args.basis_k, args.basis_k)
    value = minimum_distance_index(matrix)
    print(f"{value:.17g}")
    return EXIT_OK


def version_command(args) -> int:
    print(f"mfica {__version__}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfica",
        description="mfica - independent component analysis for multivariate functional data",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  mfica fit --input curves.csv --output-dir out --basis-k 11
  mfica ica --input out/coefficients.csv --output-dir out --method fobi --d 3
  mfica scores --input new_coefficients.csv --model out/model.json --output-dir out --select 2
  mfica simulate --config study.json --output-dir study --workers 8
  mfica mdi --input gain.csv --basis-k 11
        """,
    )
    parser.add_argument("--version", action="version", version=f"mfica {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    version_parser = subparsers.add_parser("version", help="Show version information")
    version_parser.set_defaults(func=version_command)

    fit_parser = subparsers.add_parser("fit", help="Fit basis coefficients to sampled curves")
    fit_parser.add_argument("--input", help="Long-format curves CSV (obs_id,component,t,value)")
    fit_parser.add_argument("--output-dir", default=".", help="Output directory (default: .)")
    fit_parser.add_argument("--basis-k", type=int, default=11, help="Odd basis size (default: 11)")
    fit_parser.add_argument(
        "--interval", type=float, nargs=2, default=[0.0, 1.0], metavar=("A", "B"),
        help="Basis interval (default: 0 1)",
    )
    fit_parser.add_argument("--ridge", type=float, default=0.0, help="Ridge penalty (default: 0)")
    fit_parser.add_argument("--verbose", action="store_true", help="Enable verbose output")
    fit_parser.set_defaults(func=fit_command)

    ica_parser = subparsers.add_parser("ica", help="Fit an unmixing model to coefficients")
    ica_parser.add_argument("--input", help="Coefficients CSV written by 'fit'")
    ica_parser.add_argument("--output-dir", default=".", help="Output directory (default: .)")
    ica_parser.add_argument("--basis", help="Basis JSON written by 'fit'")
    ica_parser.add_argument("--basis-k", type=int, help="Expected basis size (checked)")
    ica_parser.add_argument("--d", type=int, help="Reduced dimension (default: p)")
    ica_parser.add_argument(
        "--method", choices=["pca", "fobi", "jade"], default="jade", help="Rotation (default: jade)"
    )
    ica_parser.add_argument("--verbose", action="store_true", help="Enable verbose output")
    ica_parser.set_defaults(func=ica_command)

    scores_parser = subparsers.add_parser("scores", help="Apply a saved model to coefficients")
    scores_parser.add_argument("--input", help="Coefficients CSV")
    scores_parser.add_argument("--model", help="Model JSON written by 'ica'")
    scores_parser.add_argument("--output-dir", default=".", help="Output directory (default: .)")
    scores_parser.add_argument("--select", type=int, help="Keep only k scores")
    scores_parser.add_argument(
        "--rule", choices=["kurtosis", "variance"], default="kurtosis",
        help="Selection rule for --select (default: kurtosis, lowest fourth moments first)",
    )
    scores_parser.add_argument("--verbose", action="store_true", help="Enable verbose output")
    scores_parser.set_defaults(func=scores_command)

    sim_parser = subparsers.add_parser("simulate", help="Run the Monte-Carlo mixing study")
    sim_parser.add_argument("--config", help="Study config JSON (default: the full grid)")
    sim_parser.add_argument("--output-dir", default=".", help="Output directory (default: .)")
    sim_parser.add_argument("--seed", type=int, help="Master seed (default: $MFICA_SEED)")
    sim_parser.add_argument("--replications", type=int, help="Replications per cell (default: 100)")
    sim_parser.add_argument("--workers", type=int, help="Worker processes (default: $MFICA_WORKERS)")
    sim_parser.add_argument("--verbose", action="store_true", help="Enable verbose output")
    sim_parser.set_defaults(func=simulate_command)

    mdi_parser = subparsers.add_parser("mdi", help="Minimum distance index of a matrix CSV")
    mdi_parser.add_argument("--input", help="Headerless matrix CSV")
    mdi_parser.add_argument("--basis-k", type=int, help="Collapse a d x pK gain in blocks of K first")
    mdi_parser.set_defaults(func=mdi_command)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not hasattr(args, "func"):
        parser.print_help()
        return EXIT_INPUT

    try:
        return args.func(args)
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return EXIT_INTERRUPTED
    except InputError as e:
        print(f"Input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as e:
        print(f"Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as e:
        print(f"Unexpected error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
