"""Command-line frontend.

Exit codes: 0 ok, 1 statistical/constraint check failed, 2 usage or parse error,
3 I/O failure, 4 matrix not self-adjoint, 5 numerical singularity, 6 wrong regime.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import matrixio
from .config import CONSTRAINT_TOL, PIVOT_TOL, VANISH_TOL, Field, Tolerances, matrix_scale
from .density import EigenSample, log_density_eigen, log_density_elements
from .ensemble import EnsembleSpec, sample_gaussian, sample_wishart
from .errors import (
    AntiWishartError,
    ConvergenceError,
    DimensionError,
    DomainError,
    IllConditionedWarning,
    NotSelfAdjointError,
    NumericalSingularityError,
    PivotError,
    RegimeError,
)
from .matrix_core import gram, validate_hermitian
from .reconstruction import PartialWishart, consistency_check, reconstruct
from .reduction import detect_rank, reduce_trace
from .verify import (
    eigen_histogram,
    gamma_shape_test,
    identity_fuzz,
    moment_test,
    random_gaussian_shapes,
    spectral_coincidence,
)

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INVALID_MATRIX = 4
EXIT_SINGULAR = 5
EXIT_REGIME = 6

ENV_SEED = "AWK_SEED"
ENV_TOL = {"pivot": "AWK_TOL_PIVOT", "vanish": "AWK_TOL_VANISH", "constraint": "AWK_TOL_CONSTRAINT"}
DEFAULT_TOL = {"pivot": PIVOT_TOL, "vanish": VANISH_TOL, "constraint": CONSTRAINT_TOL}


class UsageError(AntiWishartError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int
    tolerances: Tolerances
    output_path: str | None
    fmt: str | None


def _env_number(name: str, cast):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return None
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"environment variable {name}={raw!r} is not a valid number") from None


def run_config(args: argparse.Namespace) -> RunConfig:
    """Flags take precedence over AWK_* environment variables, which beat defaults."""
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = _env_number(ENV_SEED, int)
    tols = {}
    for name, env in ENV_TOL.items():
        value = getattr(args, f"tol_{name}", None)
        if value is None:
            value = _env_number(env, float)
        tols[name] = DEFAULT_TOL[name] if value is None else value
    try:
        tolerances = Tolerances(**tols)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(
        seed=0 if seed is None else seed,
        tolerances=tolerances,
        output_path=getattr(args, "output", None),
        fmt=getattr(args, "format", None),
    )


# ------------------------------------------------------------------- arguments


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be >= 1")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"{v} must be positive")
    return v


def _parents() -> dict[str, argparse.ArgumentParser]:
    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("-i", "--input", help="input matrix file ('-' or omitted: stdin)")
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", help="output file (default: stdout)")
    out.add_argument("--format", choices=["json", "csv"], help="matrix file format")
    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tol-pivot", type=_positive_float, help=f"pivot tolerance (default {PIVOT_TOL:g})")
    tol.add_argument("--tol-vanish", type=_positive_float, help=f"vanishing tolerance (default {VANISH_TOL:g})")
    tol.add_argument(
        "--tol-constraint", type=_positive_float, help=f"constraint tolerance (default {CONSTRAINT_TOL:g})"
    )
    seed = argparse.ArgumentParser(add_help=False)
    seed.add_argument("--seed", type=_seed, help=f"64-bit seed (env {ENV_SEED}, default 0)")
    fld = argparse.ArgumentParser(add_help=False)
    fld.add_argument("--field", choices=[f.value for f in Field], help="scalar field")
    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--trials", type=_positive_int)
    mc.add_argument("--workers", type=_positive_int, default=1)
    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--rows", type=_positive_int, required=True, help="rows n of A")
    shape.add_argument("--cols", type=_positive_int, required=True, help="columns k of A")
    return {"in": inp, "out": out, "tol": tol, "seed": seed, "field": fld, "mc": mc, "shape": shape}


def build_parser() -> argparse.ArgumentParser:
    p = _parents()
    parser = argparse.ArgumentParser(
        prog="antiwishart",
        description="Exact finite-size Wishart / Anti-Wishart matrix tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", parents=[p["shape"], p["field"], p["seed"], p["out"]],
                       help="draw A (or Omega = A^dagger A with --gram)")
    s.add_argument("--index", type=int, default=0, help="trial index within the seed's stream")
    s.add_argument("--gram", action="store_true", help="write Omega instead of A")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("gram", parents=[p["in"], p["out"]], help="Omega = A^dagger A of an input A")
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("reduce", parents=[p["in"], p["tol"]], help="run the reduction recursion")
    s.add_argument("--steps", type=int, help="maximum number of steps (default: dim)")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("detect-rank", parents=[p["in"], p["tol"]], help="number of rows behind Omega")
    s.set_defaults(func=cmd_detect_rank)

    s = sub.add_parser("reconstruct", parents=[p["in"], p["out"], p["tol"], p["field"]],
                       help="complete Omega from its first n rows")
    s.add_argument("--n", type=_positive_int, help="number of known rows (default: input rows)")
    s.add_argument("--k", type=_positive_int, help="matrix dimension (default: input columns)")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("check", parents=[p["in"], p["tol"], p["field"]],
                       help="redundancy constraint residuals of a full Omega")
    s.add_argument("--n", type=_positive_int, required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("density", parents=[p["in"], p["tol"], p["field"]],
                       help="log unnormalized element density")
    s.add_argument("--n", type=_positive_int, required=True)
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("eigdensity", parents=[p["in"], p["field"]],
                       help="log unnormalized joint eigenvalue density")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--k", type=_positive_int, required=True)
    s.add_argument("--values", help="comma-separated eigenvalues (else JSON list from --input)")
    s.set_defaults(func=cmd_eigdensity)

    v = sub.add_parser("verify", help="Monte Carlo and algebraic checks")
    vsub = v.add_subparsers(dest="check", required=True)

    s = vsub.add_parser("moments", parents=[p["shape"], p["field"], p["seed"], p["mc"]])
    s.add_argument("--order", type=int, choices=[1, 2], default=1)
    s.set_defaults(func=cmd_verify_moments, trials_default=10_000)

    s = vsub.add_parser("gamma", parents=[p["seed"], p["mc"]], help="Gamma(n, 1) law for k = 1")
    s.add_argument("--n", type=_positive_int, required=True)
    s.set_defaults(func=cmd_verify_gamma, trials_default=100_000)

    s = vsub.add_parser("spectra", parents=[p["seed"], p["mc"]])
    s.add_argument("--max-rows", type=_positive_int, default=12)
    s.add_argument("--max-cols", type=_positive_int, default=12)
    s.add_argument("--tol", type=_positive_float, default=VANISH_TOL)
    s.set_defaults(func=cmd_verify_spectra, trials_default=200)

    s = vsub.add_parser("identity", parents=[p["seed"], p["mc"]])
    s.add_argument("--dim-min", type=int, default=3)
    s.add_argument("--dim-max", type=int, default=8)
    s.set_defaults(func=cmd_verify_identity, trials_default=1000)

    s = vsub.add_parser("histogram", parents=[p["shape"], p["field"], p["seed"], p["mc"]])
    s.add_argument("--bins", type=_positive_int, default=50)
    s.set_defaults(func=cmd_verify_histogram, trials_default=1000)

    return parser


# -------------------------------------------------------------------- commands


def _emit(report: dict) -> None:
    sys.stdout.write(matrixio.dumps(report) + "\n")


def _load_hermitian(args, cfg: RunConfig) -> tuple[np.ndarray, Field]:
    m, fld = matrixio.read_matrix(args.input, None)
    return validate_hermitian(m, cfg.tolerances.asymmetry), fld


def _field(args, default: Field) -> Field:
    return Field(args.field) if getattr(args, "field", None) else default


def cmd_sample(args, cfg: RunConfig) -> int:
    spec = EnsembleSpec(args.rows, args.cols, Field(args.field or "complex"), cfg.seed)
    m = sample_wishart(spec, args.index) if args.gram else sample_gaussian(spec, args.index)
    matrixio.write_matrix(cfg.output_path, m, cfg.fmt, spec.field)
    return EXIT_OK


def cmd_gram(args, cfg: RunConfig) -> int:
    a, fld = matrixio.read_matrix(args.input, None)
    matrixio.write_matrix(cfg.output_path, gram(a), cfg.fmt, fld)
    return EXIT_OK


def cmd_reduce(args, cfg: RunConfig) -> int:
    omega, fld = _load_hermitian(args, cfg)
    trace = reduce_trace(omega, args.steps, cfg.tolerances.vanish, pivot_tol=cfg.tolerances.pivot)
    _emit({
        "dim": omega.shape[0],
        "pivots": list(trace.pivots),
        "terminated_at": trace.terminated_at,
        "step_norms": [float(np.max(np.abs(s))) if s.size else 0.0 for s in trace.steps],
        "steps": [matrixio.matrix_to_dict(s, fld) for s in trace.steps],
    })
    return EXIT_OK


def cmd_detect_rank(args, cfg: RunConfig) -> int:
    omega, _ = _load_hermitian(args, cfg)
    report = detect_rank(omega, cfg.tolerances.vanish, pivot_tol=cfg.tolerances.pivot)
    _emit({
        "dim": omega.shape[0],
        "detected_n": report.detected_n,
        "vanishing_norm": report.vanishing_norm,
        "pivot_history": list(report.pivot_history),
    })
    return EXIT_OK


def cmd_reconstruct(args, cfg: RunConfig) -> int:
    rows, fld = matrixio.read_matrix(args.input, None)
    fld = _field(args, fld)
    n = args.n if args.n is not None else rows.shape[0]
    k = args.k if args.k is not None else rows.shape[1]
    if n >= k:
        raise RegimeError(f"reconstruction needs n < k, got n={n}, k={k}")
    if rows.shape[1] != k or rows.shape[0] < n:
        raise UsageError(f"input is {rows.shape[0]}x{rows.shape[1]}, expected at least {n} rows and {k} columns")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IllConditionedWarning)
        omega = reconstruct(PartialWishart(rows[:n], fld), pivot_tol=cfg.tolerances.pivot)
    check = consistency_check(omega, n, fld, pivot_tol=cfg.tolerances.pivot)
    matrixio.write_matrix(cfg.output_path, omega, cfg.fmt, fld)
    summary = {
        "n": n,
        "k": k,
        "max_abs_residual": check.max_abs,
        "scale": matrix_scale(omega),
        "constraint_count": check.constraint_count,
        "ill_conditioned": any(issubclass(w.category, IllConditionedWarning) for w in caught),
    }
    text = matrixio.dumps(summary) + "\n"
    (sys.stderr if cfg.output_path in (None, "-") else sys.stdout).write(text)
    return EXIT_OK


def cmd_check(args, cfg: RunConfig) -> int:
    omega, fld = _load_hermitian(args, cfg)
    fld = _field(args, fld)
    report = consistency_check(omega, args.n, fld, pivot_tol=cfg.tolerances.pivot)
    scale = matrix_scale(omega)
    ok = report.max_abs < cfg.tolerances.constraint * scale
    _emit({
        "n": args.n,
        "k": omega.shape[0],
        "max_abs": report.max_abs,
        "scale": scale,
        "constraint_count": report.constraint_count,
        "residuals": matrixio.matrix_to_dict(report.residuals, fld),
        "pass": ok,
    })
    return EXIT_OK if ok else EXIT_STAT_FAIL


def cmd_density(args, cfg: RunConfig) -> int:
    omega, fld = _load_hermitian(args, cfg)
    res = log_density_elements(omega, args.n, _field(args, fld), cfg.tolerances.constraint)
    _emit({"log_value": res.log_value, "support_ok": res.support_ok, "residual_max": res.residual_max})
    return EXIT_OK


def cmd_eigdensity(args, cfg: RunConfig) -> int:
    if args.values is not None:
        try:
            values = [float(x) for x in args.values.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad --values {args.values!r}") from None
    else:
        text = sys.stdin.read() if args.input in (None, "-") else Path(args.input).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise matrixio.MatrixFormatError(f"invalid JSON: {exc}") from None
        values = data.get("values") if isinstance(data, dict) else data
        if not isinstance(values, list):
            raise matrixio.MatrixFormatError("expected a JSON list of eigenvalues")
    sample = EigenSample.from_values(values, args.n, args.k, _field(args, Field.COMPLEX))
    _emit({"log_value": log_density_eigen(sample), "beta": sample.beta, "n": args.n, "k": args.k})
    return EXIT_OK


def _trials(args) -> int:
    return args.trials if args.trials is not None else args.trials_default


def cmd_verify_moments(args, cfg: RunConfig) -> int:
    spec = EnsembleSpec(args.rows, args.cols, Field(args.field or "complex"), cfg.seed)
    report = moment_test(spec, args.order, _trials(args), args.workers)
    _emit({"rows": spec.n, "cols": spec.k, "field": spec.field.value, "seed": spec.seed, **report.to_dict()})
    return EXIT_OK if report.passed else EXIT_STAT_FAIL


def cmd_verify_gamma(args, cfg: RunConfig) -> int:
    report = gamma_shape_test(args.n, _trials(args), cfg.seed, args.workers)
    _emit({"seed": cfg.seed, **report.to_dict()})
    return EXIT_OK if report.passed else EXIT_STAT_FAIL


def cmd_verify_spectra(args, cfg: RunConfig) -> int:
    trials = _trials(args)
    failures = [
        list(shape)
        for shape, a in random_gaussian_shapes(cfg.seed, trials, args.max_rows, args.max_cols)
        if not spectral_coincidence(a, args.tol)
    ]
    _emit({"trials": trials, "seed": cfg.seed, "failures": failures, "pass": not failures})
    return EXIT_OK if not failures else EXIT_STAT_FAIL


def cmd_verify_identity(args, cfg: RunConfig) -> int:
    report = identity_fuzz(_trials(args), (args.dim_min, args.dim_max), cfg.seed)
    _emit({"seed": cfg.seed, **report.to_dict()})
    return EXIT_OK if report.passed else EXIT_STAT_FAIL


def cmd_verify_histogram(args, cfg: RunConfig) -> int:
    spec = EnsembleSpec(args.rows, args.cols, Field(args.field or "complex"), cfg.seed)
    trials = _trials(args)
    hist = eigen_histogram(spec, trials, args.bins, cfg.tolerances.vanish, args.workers)
    expected_zero = trials * max(spec.k - spec.n, 0)
    ok = hist.total == trials * min(spec.n, spec.k) and hist.zero_modes == expected_zero
    _emit({"rows": spec.n, "cols": spec.k, "trials": trials, **hist.to_dict(),
           "expected_zero_modes": expected_zero, "pass": ok})
    return EXIT_OK if ok else EXIT_STAT_FAIL


# ------------------------------------------------------------------------ main


def _fail(code: int, exc: BaseException, **extra) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc), **extra}
    sys.stderr.write(matrixio.dumps(payload, indent=None) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = run_config(args)
        return args.func(args, cfg)
    except PivotError as exc:
        return _fail(EXIT_SINGULAR, exc, step=exc.step)
    except (NumericalSingularityError, ConvergenceError) as exc:
        return _fail(EXIT_SINGULAR, exc)
    except NotSelfAdjointError as exc:
        return _fail(EXIT_INVALID_MATRIX, exc)
    except RegimeError as exc:
        return _fail(EXIT_REGIME, exc)
    except (UsageError, matrixio.MatrixFormatError, DimensionError, DomainError) as exc:
        return _fail(EXIT_USAGE, exc)
    except OSError as exc:
        return _fail(EXIT_IO, exc)


if __name__ == "__main__":
    sys.exit(main())
