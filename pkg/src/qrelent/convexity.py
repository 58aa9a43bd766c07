"""Randomized midpoint/Jensen testers for convexity and concavity claims.

These are falsification harnesses, not proofs: each suite draws seeded
random instances, evaluates the claimed inequality along segments, and
reports normalized violations.  A report is a pure function of
``(dim, trials, seed, tol)``; every trial derives its own generator from
the master seed and the trial index, so reruns are identical regardless
of evaluation order.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Sequence, Union

import numpy as np

from .divergence import relative_entropy
from .errors import SegmentEvaluationError
from .hermitian import (
    HermitianMatrix,
    PdMatrix,
    sample_hermitian,
    sample_pd,
    trial_rng,
    validate_pd,
)
from .variational import (
    OptimizeConfig,
    fenchel_value,
    maximize_lieb,
    trace_exp_log,
)

# Deterministic interior grid; endpoint t-values are trivially tight and
# deliberately omitted.  Each trial appends one uniform random t.
T_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)

_ORIENTATIONS = {"convex": 1.0, "concave": -1.0}

# Required agreement between an optimizer-evaluated partial maximum and the
# direct trace-exponential value, normalized by 1 + |direct value|.
VALUE_AGREEMENT_RTOL = 1e-6
# Largest tolerated fraction of non-converged (invalid) trials.
MAX_INVALID_FRACTION = 0.05

Matrix = Union[HermitianMatrix, PdMatrix]
Point = Sequence[Matrix]


@dataclasses.dataclass(frozen=True)
class SegmentTrial:
    """One Jensen comparison at mixture parameter ``t``.

    ``violation = (lhs - rhs) * orientation / scale`` with orientation +1
    for convexity claims and -1 for concavity claims, so positive means the
    claimed inequality failed.  ``witness`` carries the offending instance
    (in the matrix file format) when the trial violates the tolerance.
    """

    t: float
    lhs: float
    rhs: float
    violation: float
    scale: float
    valid: bool = True
    witness: dict | None = None

    def to_json_dict(self) -> dict:
        out = {
            "t": self.t,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "violation": self.violation,
            "scale": self.scale,
        }
        if not self.valid:
            out["valid"] = False
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclasses.dataclass(frozen=True)
class BoundTrial:
    """One scalar bound check (used by the klein and variational suites)."""

    kind: str
    value: float
    bound: float
    violation: float
    scale: float
    valid: bool = True

    def to_json_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "value": self.value,
            "bound": self.bound,
            "violation": self.violation,
            "scale": self.scale,
        }
        if not self.valid:
            out["valid"] = False
        return out


@dataclasses.dataclass(frozen=True)
class SuiteReport:
    """Aggregate outcome of one property suite.

    ``passed`` (serialized as ``"pass"``) is ``max_violation <= tol``;
    suites that run the optimizer additionally require the invalid-trial
    fraction and the value-agreement gap recorded in ``extras`` to stay
    within their bounds.
    """

    suite_name: str
    trials: list
    max_violation: float
    passed: bool
    config_echo: dict
    invalid_trials: int = 0
    extras: dict = dataclasses.field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "suite_name": self.suite_name,
            "trials": [t.to_json_dict() for t in self.trials],
            "max_violation": self.max_violation,
            "pass": self.passed,
            "config_echo": self.config_echo,
            "invalid_trials": self.invalid_trials,
            "extras": self.extras,
        }


def _as_point(p) -> tuple:
    if isinstance(p, (HermitianMatrix, PdMatrix)):
        return (p,)
    return tuple(p)


def _mix_component(t: float, a: Matrix, b: Matrix) -> Matrix:
    """Componentwise mixture ``t a + (1-t) b``; PD components are revalidated."""
    if isinstance(a, PdMatrix) and isinstance(b, PdMatrix):
        return validate_pd(a.base * t + b.base * (1.0 - t))
    if isinstance(a, HermitianMatrix) and isinstance(b, HermitianMatrix):
        return a * t + b * (1.0 - t)
    raise TypeError(f"cannot mix {type(a).__name__} with {type(b).__name__}")


def _mix_point(t: float, p1: tuple, p2: tuple) -> tuple:
    return tuple(_mix_component(t, a, b) for a, b in zip(p1, p2))


def _call(f: Callable[..., float], point: tuple, t: float) -> float:
    try:
        return float(f(*point))
    except Exception as exc:  # noqa: BLE001 - re-raised with context
        raise SegmentEvaluationError(t, str(exc)) from exc


def segment_test(
    f: Callable[..., float],
    p1,
    p2,
    t_samples: Sequence[float],
    orientation: str,
) -> list[SegmentTrial]:
    """Evaluate a Jensen inequality along the segment from ``p2`` to ``p1``.

    For each ``t`` the mixture is ``t p1 + (1-t) p2`` (componentwise), the
    left side is ``f`` at the mixture, and the right side the scalar
    mixture of the endpoint values.  Violations are normalized by
    ``1 + |f(p1)| + |f(p2)|``.
    """
    orient = _ORIENTATIONS[orientation]
    p1, p2 = _as_point(p1), _as_point(p2)
    f1 = _call(f, p1, 1.0)
    f2 = _call(f, p2, 0.0)
    scale = 1.0 + abs(f1) + abs(f2)
    trials = []
    for t in t_samples:
        t = float(t)
        lhs = _call(f, _mix_point(t, p1, p2), t)
        rhs = t * f1 + (1.0 - t) * f2
        violation = (lhs - rhs) * orient / scale
        trials.append(SegmentTrial(t, lhs, rhs, violation, scale))
    return trials


def _matrix_dict(m: Matrix) -> dict:
    # Matrix file format; kept inline to avoid a dependency on the io module.
    e = m.entries
    return {
        "dim": int(e.shape[0]),
        "re": [float(v) for v in e.real.ravel()],
        "im": [float(v) for v in e.imag.ravel()],
    }


def _witness(t: float, p1: tuple, p2: tuple) -> dict:
    return {
        "t": t,
        "p1": [_matrix_dict(m) for m in p1],
        "p2": [_matrix_dict(m) for m in p2],
    }


def _attach_witnesses(trials, p1, p2, tol):
    out = []
    for tr in trials:
        if tr.valid and tr.violation > tol:
            tr = dataclasses.replace(tr, witness=_witness(tr.t, p1, p2))
        out.append(tr)
    return out


def _finish(name, trials, tol, config_echo, invalid=0, extras=None, extra_ok=True):
    valid_violations = [tr.violation for tr in trials if tr.valid]
    max_violation = max(valid_violations, default=math.nan)
    passed = bool(valid_violations) and max_violation <= tol and extra_ok
    return SuiteReport(
        suite_name=name,
        trials=trials,
        max_violation=max_violation,
        passed=passed,
        config_echo=config_echo,
        invalid_trials=invalid,
        extras=extras or {},
    )


def _check_args(dim: int, trials: int, tol: float, max_dim: int = 64) -> None:
    if not 1 <= dim <= max_dim:
        raise ValueError(f"dim must lie in [1, {max_dim}], got {dim}")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")


def _t_samples(rng: np.random.Generator) -> tuple:
    return T_GRID + (float(rng.uniform()),)


def joint_convexity_suite(dim: int, trials: int, seed: int, tol: float) -> SuiteReport:
    """Joint convexity of the relative entropy under simultaneous mixing.

    Each trial draws a random PD quadruple (X1, Y1, X2, Y2) and tests
    ``D(t X1 + (1-t) X2; t Y1 + (1-t) Y2) <= t D(X1;Y1) + (1-t) D(X2;Y2)``
    on the t-grid.  The report also records the smallest divergence value
    seen anywhere, which nonnegativity requires to stay above ``-tol``.
    """
    _check_args(dim, trials, tol)
    f = lambda x, y: relative_entropy(x, y).value
    all_trials: list[SegmentTrial] = []
    min_value = math.inf
    for i in range(trials):
        rng = trial_rng(seed, i)
        x1 = sample_pd(rng, dim, 0.1)
        y1 = sample_pd(rng, dim, 0.1)
        x2 = sample_pd(rng, dim, 0.1)
        y2 = sample_pd(rng, dim, 0.1)
        p1, p2 = (x1, y1), (x2, y2)
        seg = segment_test(f, p1, p2, _t_samples(rng), "convex")
        min_value = min(min_value, f(x1, y1), f(x2, y2), *(tr.lhs for tr in seg))
        all_trials.extend(_attach_witnesses(seg, p1, p2, tol))
    return _finish(
        "joint-convexity",
        all_trials,
        tol,
        {"dim": dim, "trials": trials, "seed": seed, "tol": tol},
        extras={"min_divergence_value": min_value},
    )


def lieb_concavity_suite(
    dim: int, trials: int, seed: int, tol: float, orientation: str = "concave"
) -> SuiteReport:
    """Concavity of ``A -> tr exp(H + log A)`` for fixed self-adjoint ``H``.

    ``orientation`` exists for the harness self-test: running the same
    instances with ``"convex"`` must fail for generic dim >= 2, proving
    the tester can detect violations at all.
    """
    _check_args(dim, trials, tol)
    all_trials: list[SegmentTrial] = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        h = sample_hermitian(rng, dim, 3.0)
        a1 = sample_pd(rng, dim, 0.1)
        a2 = sample_pd(rng, dim, 0.1)
        seg = segment_test(
            lambda a: trace_exp_log(h, a), (a1,), (a2,), _t_samples(rng), orientation
        )
        all_trials.extend(_attach_witnesses(seg, (a1,), (a2,), tol))
    return _finish(
        "lieb-concavity",
        all_trials,
        tol,
        {
            "dim": dim,
            "trials": trials,
            "seed": seed,
            "tol": tol,
            "orientation": orientation,
        },
    )


def fenchel_convexity_suite(dim: int, trials: int, seed: int, tol: float) -> SuiteReport:
    """Convexity of ``H -> tr exp(H + log A)`` for fixed positive-definite ``A``."""
    _check_args(dim, trials, tol)
    all_trials: list[SegmentTrial] = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        a = sample_pd(rng, dim, 0.1)
        h1 = sample_hermitian(rng, dim, 3.0)
        h2 = sample_hermitian(rng, dim, 3.0)
        seg = segment_test(
            lambda h: fenchel_value(h, a), (h1,), (h2,), _t_samples(rng), "convex"
        )
        all_trials.extend(_attach_witnesses(seg, (h1,), (h2,), tol))
    return _finish(
        "fenchel",
        all_trials,
        tol,
        {"dim": dim, "trials": trials, "seed": seed, "tol": tol},
    )


def _centered_pd(rng: np.random.Generator, dim: int, spread: float) -> PdMatrix:
    """Random PD matrix rescaled so its log-spectrum is centered at zero."""
    a = sample_pd(rng, dim, spread)
    w = np.linalg.eigvalsh(a.entries)
    return a.scaled(1.0 / math.sqrt(float(w[0]) * float(w[-1])))


def sample_lieb_instance(
    rng: np.random.Generator, dim: int
) -> tuple[HermitianMatrix, PdMatrix]:
    """Conditioned (H, A) pair for optimizer-backed evaluations.

    ``H`` has spectral radius <= 1.7 and ``A`` a centered log-spectrum, so
    the eigenvalues of ``H + log A`` stay near [-3, 3]; failures then
    indicate math errors rather than conditioning.
    """
    h = sample_hermitian(rng, dim, 1.7)
    a = _centered_pd(rng, dim, 0.3)
    return h, a


def partial_max_concavity_suite(
    dim: int,
    trials: int,
    seed: int,
    tol: float,
    cfg: OptimizeConfig | None = None,
) -> SuiteReport:
    """Concavity of the optimizer-evaluated partial maximum over ``X``.

    Defines ``g(A)`` as the maximum of ``tr(XH) - (D(X;A) - tr A)`` found
    by gradient ascent (identity start) and segment-tests ``g`` with the
    concave orientation.  Every evaluation is also compared against the
    direct value ``tr exp(H + log A)``; non-converged evaluations mark the
    affected trials invalid, and more than 5% invalid fails the suite, as
    does a value-agreement gap beyond ``VALUE_AGREEMENT_RTOL``.
    """
    _check_args(dim, trials, tol, max_dim=16)
    all_trials: list[SegmentTrial] = []
    invalid = 0
    max_value_gap = 0.0

    for i in range(trials):
        rng = trial_rng(seed, i)
        h, a1 = sample_lieb_instance(rng, dim)
        a2 = _centered_pd(rng, dim, 0.3)
        ts = _t_samples(rng)

        def evaluate(a: PdMatrix):
            res = maximize_lieb(h, a, PdMatrix.identity(dim), cfg)
            direct = trace_exp_log(h, a)
            gap = abs(res.value - direct) / (1.0 + abs(direct))
            return res.value, res.converged, gap

        g1, ok1, gap1 = evaluate(a1)
        g2, ok2, gap2 = evaluate(a2)
        if not (ok1 and ok2):
            all_trials.extend(
                SegmentTrial(float(t), 0.0, 0.0, 0.0, 1.0, valid=False) for t in ts
            )
            invalid += len(ts)
            continue
        max_value_gap = max(max_value_gap, gap1, gap2)
        scale = 1.0 + abs(g1) + abs(g2)

        seg: list[SegmentTrial] = []
        for t in ts:
            t = float(t)
            mixed = validate_pd(a1.base * t + a2.base * (1.0 - t))
            gm, okm, gapm = evaluate(mixed)
            if not okm:
                seg.append(SegmentTrial(t, 0.0, 0.0, 0.0, scale, valid=False))
                invalid += 1
                continue
            max_value_gap = max(max_value_gap, gapm)
            rhs = t * g1 + (1.0 - t) * g2
            violation = -(gm - rhs) / scale
            seg.append(SegmentTrial(t, gm, rhs, violation, scale))
        all_trials.extend(_attach_witnesses(seg, (h, a1), (h, a2), tol))

    total = len(all_trials)
    invalid_fraction = invalid / total if total else 1.0
    extra_ok = invalid_fraction <= MAX_INVALID_FRACTION and max_value_gap <= VALUE_AGREEMENT_RTOL
    return _finish(
        "partial-max",
        all_trials,
        tol,
        {"dim": dim, "trials": trials, "seed": seed, "tol": tol},
        invalid=invalid,
        extras={
            "invalid_fraction": invalid_fraction,
            "max_value_gap": max_value_gap,
            "value_agreement_rtol": VALUE_AGREEMENT_RTOL,
            "max_invalid_fraction": MAX_INVALID_FRACTION,
        },
        extra_ok=extra_ok,
    )
