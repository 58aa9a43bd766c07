"""Command-line entry point: property-suite runs and one-shot evaluations.

``qrelent verify`` runs the randomized certification suites and writes a
deterministic JSON report; ``qrelent eval`` evaluates a single expression
on matrices read from files.  Exit statuses: 0 all checks pass, 1 a
violation was found, 2 usage/config/parse error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import __version__
from .convexity import (
    BoundTrial,
    SuiteReport,
    VALUE_AGREEMENT_RTOL,
    MAX_INVALID_FRACTION,
    fenchel_convexity_suite,
    joint_convexity_suite,
    lieb_concavity_suite,
    partial_max_concavity_suite,
    sample_lieb_instance,
)
from .divergence import entropy, klein_check, relative_entropy
from .errors import QrelentError
from .hermitian import (
    HermitianMatrix,
    PdMatrix,
    mat_exp,
    mat_log,
    sample_pd,
    trial_rng,
    validate_pd,
)
from .matrixio import read_matrix, write_report
from .variational import (
    lieb_objective,
    maximize_lieb,
    maximize_variational,
    trace_exp_log,
)

SUITE_NAMES = (
    "klein",
    "joint-convexity",
    "lieb-concavity",
    "partial-max",
    "fenchel",
    "variational",
)

_DEFAULT_DIM = 6
_DEFAULT_SEED = 42
_DEFAULT_TRIALS = {name: 50 if name == "partial-max" else 200 for name in SUITE_NAMES}
_DEFAULT_TOL = {name: 1e-8 if name == "partial-max" else 1e-9 for name in SUITE_NAMES}
# partial-max runs one optimization per evaluation; its dimension is capped.
_PARTIAL_MAX_DIM_CAP = 16

# Agreement budgets for optimizer-backed trials: the recorded violation is
# the normalized gap minus its budget, so healthy runs sit well below zero.
_OPT_VALUE_RTOL = VALUE_AGREEMENT_RTOL
_OPT_ARGMAX_TOL = 1e-4
# Strictness probe: divergence of clearly separated pairs must exceed this.
_SEPARATION_MIN_DIVERGENCE = 1e-8
_SEPARATION_DISTANCE = 0.1


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Configuration of one ``verify`` invocation.

    ``trials`` and ``tol`` may be None, meaning each suite uses its own
    default (200 / 1e-9, except partial-max with 50 / 1e-8).
    """

    suite: str
    dim: int = _DEFAULT_DIM
    trials: int | None = None
    seed: int = _DEFAULT_SEED
    tol: float | None = None
    out_path: str | None = None
    flip_orientation: bool = False

    def validate(self) -> None:
        if self.suite != "all" and self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if not 1 <= self.dim <= 64:
            raise ValueError(f"dim must lie in [1, 64], got {self.dim}")
        if self.trials is not None and self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.tol is not None and not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")


def klein_suite(dim: int, trials: int, seed: int, tol: float) -> SuiteReport:
    """Nonnegativity of the divergence on random PD pairs.

    Three trial kinds: ``nonneg`` (D >= -tol * scale on random pairs),
    ``identity`` (D(X;X) <= tol * scale), and ``separated`` (D >= 1e-8
    whenever the pair is at least 0.1 apart in Frobenius norm).
    """
    records: list[BoundTrial] = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        x = sample_pd(rng, dim, 0.1)
        y = sample_pd(rng, dim, 0.1)
        scale = 1.0 + x.frobenius_norm() + y.frobenius_norm()
        check = klein_check(x, y, tol * scale)
        records.append(
            BoundTrial("nonneg", check.value, 0.0, -check.value / scale, scale)
        )

    for i in range(max(1, trials // 5)):
        rng = trial_rng(seed, 1_000_000 + i)
        x = sample_pd(rng, dim, 0.1)
        value = relative_entropy(x, x).value
        scale = 1.0 + x.frobenius_norm()
        records.append(BoundTrial("identity", value, 0.0, abs(value) / scale, scale))

    for i in range(min(100, trials)):
        rng = trial_rng(seed, 2_000_000 + i)
        x = sample_pd(rng, dim, 0.1)
        y = sample_pd(rng, dim, 0.1)
        for _ in range(1000):
            if (x.base - y.base).frobenius_norm() >= _SEPARATION_DISTANCE:
                break
            y = sample_pd(rng, dim, 0.1)
        value = relative_entropy(x, y).value
        records.append(
            BoundTrial(
                "separated", value, _SEPARATION_MIN_DIVERGENCE,
                _SEPARATION_MIN_DIVERGENCE - value, 1.0,
            )
        )

    max_violation = max(r.violation for r in records)
    return SuiteReport(
        suite_name="klein",
        trials=records,
        max_violation=max_violation,
        passed=max_violation <= tol,
        config_echo={"dim": dim, "trials": trials, "seed": seed, "tol": tol},
    )


def variational_suite(dim: int, trials: int, seed: int, tol: float) -> SuiteReport:
    """Optimizer agreement with the closed-form maximizers.

    Each trial maximizes the trace variational objective on a random ``Y``
    (argmax must be ``Y`` with value ``tr Y``) and the trace-exponential
    objective on a conditioned ``(H, A)`` pair (argmax ``exp(H + log A)``
    with value ``tr exp(H + log A)``).  Recorded violations are normalized
    gaps minus their budgets (1e-6 for values, 1e-4 for maximizers).
    """
    records: list[BoundTrial] = []
    invalid = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        y = sample_pd(rng, dim, 0.1)
        res = maximize_variational(y)
        if not res.converged:
            records.append(BoundTrial("variational-value", 0.0, _OPT_VALUE_RTOL, 0.0, 1.0, valid=False))
            invalid += 1
        else:
            tr_y = y.trace()
            value_gap = abs(res.value - tr_y) / (1.0 + abs(tr_y))
            argmax_gap = (res.maximizer.base - y.base).frobenius_norm() / (
                1.0 + y.frobenius_norm()
            )
            records.append(
                BoundTrial("variational-value", value_gap, _OPT_VALUE_RTOL,
                           value_gap - _OPT_VALUE_RTOL, 1.0 + abs(tr_y))
            )
            records.append(
                BoundTrial("variational-argmax", argmax_gap, _OPT_ARGMAX_TOL,
                           argmax_gap - _OPT_ARGMAX_TOL, 1.0 + y.frobenius_norm())
            )

        h, a = sample_lieb_instance(rng, dim)
        res = maximize_lieb(h, a)
        if not res.converged:
            records.append(BoundTrial("lieb-value", 0.0, _OPT_VALUE_RTOL, 0.0, 1.0, valid=False))
            invalid += 1
            continue
        direct = trace_exp_log(h, a)
        x_star = mat_exp(h + mat_log(a))
        value_gap = abs(res.value - direct) / (1.0 + abs(direct))
        argmax_gap = (res.maximizer.base - x_star.base).frobenius_norm() / (
            1.0 + x_star.frobenius_norm()
        )
        records.append(
            BoundTrial("lieb-value", value_gap, _OPT_VALUE_RTOL,
                       value_gap - _OPT_VALUE_RTOL, 1.0 + abs(direct))
        )
        records.append(
            BoundTrial("lieb-argmax", argmax_gap, _OPT_ARGMAX_TOL,
                       argmax_gap - _OPT_ARGMAX_TOL, 1.0 + x_star.frobenius_norm())
        )

    valid = [r.violation for r in records if r.valid]
    max_violation = max(valid) if valid else float("nan")
    invalid_fraction = invalid / len(records) if records else 1.0
    passed = bool(valid) and max_violation <= tol and invalid_fraction <= MAX_INVALID_FRACTION
    return SuiteReport(
        suite_name="variational",
        trials=records,
        max_violation=max_violation,
        passed=passed,
        config_echo={"dim": dim, "trials": trials, "seed": seed, "tol": tol},
        invalid_trials=invalid,
        extras={
            "invalid_fraction": invalid_fraction,
            "value_budget": _OPT_VALUE_RTOL,
            "argmax_budget": _OPT_ARGMAX_TOL,
        },
    )


def _run_suite(name: str, cfg: RunConfig) -> SuiteReport:
    trials = cfg.trials if cfg.trials is not None else _DEFAULT_TRIALS[name]
    tol = cfg.tol if cfg.tol is not None else _DEFAULT_TOL[name]
    dim = cfg.dim
    if name == "klein":
        return klein_suite(dim, trials, cfg.seed, tol)
    if name == "joint-convexity":
        return joint_convexity_suite(dim, trials, cfg.seed, tol)
    if name == "lieb-concavity":
        orientation = "convex" if cfg.flip_orientation else "concave"
        return lieb_concavity_suite(dim, trials, cfg.seed, tol, orientation=orientation)
    if name == "partial-max":
        return partial_max_concavity_suite(
            min(dim, _PARTIAL_MAX_DIM_CAP), trials, cfg.seed, tol
        )
    if name == "fenchel":
        return fenchel_convexity_suite(dim, trials, cfg.seed, tol)
    if name == "variational":
        return variational_suite(dim, trials, cfg.seed, tol)
    raise ValueError(f"unknown suite {name!r}")


def cmd_verify(cfg: RunConfig) -> int:
    """Run the selected suite(s), print one line each, persist the report."""
    cfg.validate()
    names = SUITE_NAMES if cfg.suite == "all" else (cfg.suite,)
    reports = []
    for name in names:
        report = _run_suite(name, cfg)
        reports.append(report)
        status = "PASS" if report.passed else "FAIL"
        print(
            f"{report.suite_name}: {status}  "
            f"max_violation={report.max_violation:.3e}  "
            f"trials={len(report.trials)}  invalid={report.invalid_trials}"
        )
    all_pass = all(r.passed for r in reports)
    print(f"summary: {'all suites pass' if all_pass else 'VIOLATIONS FOUND'}")

    document = {
        "summary": {
            "suites_run": [r.suite_name for r in reports],
            "all_pass": all_pass,
            "versions": {"qrelent": __version__, "numpy": np.__version__},
            "config": {
                "suite": cfg.suite,
                "dim": cfg.dim,
                "trials": cfg.trials,
                "seed": cfg.seed,
                "tol": cfg.tol,
                "flip_orientation": cfg.flip_orientation,
            },
        },
        "reports": [r.to_json_dict() for r in reports],
    }
    if cfg.out_path is not None:
        write_report(document, cfg.out_path)
        print(f"report written to {cfg.out_path}")
    return 0 if all_pass else 1


def _read_pd(path: str, label: str) -> PdMatrix:
    try:
        return validate_pd(read_matrix(path))
    except QrelentError as exc:
        raise QrelentError(f"{label} ({path}): {exc}") from exc


def _read_hermitian(path: str, label: str) -> HermitianMatrix:
    try:
        return read_matrix(path)
    except QrelentError as exc:
        raise QrelentError(f"{label} ({path}): {exc}") from exc


def cmd_eval(op: str, h_path: str | None, a_path: str | None, x_path: str | None) -> int:
    """Evaluate one expression and print the value with 17 significant digits."""
    if a_path is None:
        raise QrelentError(f"operation {op!r} requires --a")
    if op == "entropy":
        value = entropy(_read_pd(a_path, "A"))
    elif op == "trexplog":
        a = _read_pd(a_path, "A")
        h = _read_hermitian(h_path, "H") if h_path else HermitianMatrix.zeros(a.dim)
        value = trace_exp_log(h, a)
    elif op == "relent":
        if x_path is None:
            raise QrelentError("operation 'relent' requires --x")
        x = _read_pd(x_path, "X")
        y = _read_pd(a_path, "Y")
        value = relative_entropy(x, y).value
    elif op == "objective":
        if x_path is None:
            raise QrelentError("operation 'objective' requires --x")
        x = _read_pd(x_path, "X")
        a = _read_pd(a_path, "A")
        h = _read_hermitian(h_path, "H") if h_path else HermitianMatrix.zeros(a.dim)
        value = lieb_objective(x, h, a)
    else:
        raise QrelentError(f"unknown operation {op!r}")
    print(f"{value:.17g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrelent",
        allow_abbrev=False,
        description="Certify trace-function convexity claims by randomized property testing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run property suites and write a report")
    verify.add_argument("--suite", choices=SUITE_NAMES + ("all",), default="all")
    verify.add_argument("--dim", type=int, default=_DEFAULT_DIM)
    verify.add_argument("--trials", type=int, default=None,
                        help="per-suite default: 200 (partial-max: 50)")
    verify.add_argument("--seed", type=int, default=_DEFAULT_SEED)
    verify.add_argument("--tol", type=float, default=None,
                        help="per-suite default: 1e-9 (partial-max: 1e-8)")
    verify.add_argument("--out", default=None, help="write the JSON report here")
    verify.add_argument("--flip-orientation", action="store_true",
                        help="self-test hook: test the concavity suite with the "
                             "wrong orientation; a healthy build must then exit 1")

    ev = sub.add_parser("eval", help="evaluate a single expression on matrix files")
    ev.add_argument("op", choices=("trexplog", "relent", "entropy", "objective"))
    ev.add_argument("--h", default=None, help="self-adjoint H (defaults to zero)")
    ev.add_argument("--a", default=None, help="positive-definite A (Y for relent)")
    ev.add_argument("--x", default=None, help="positive-definite X")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            cfg = RunConfig(
                suite=args.suite,
                dim=args.dim,
                trials=args.trials,
                seed=args.seed,
                tol=args.tol,
                out_path=args.out,
                flip_orientation=args.flip_orientation,
            )
            return cmd_verify(cfg)
        return cmd_eval(args.op, args.h, args.a, args.x)
    except (QrelentError, ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
