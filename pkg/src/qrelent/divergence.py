"""Quantum entropy, its gradient, and the quantum relative entropy.

The divergence ``D(X;Y) = tr(X log X - X log Y - (X - Y))`` is the Bregman
divergence of the entropy ``phi(X) = tr(X log X)``: the gap between
``phi(X)`` and the best affine approximation of ``phi`` at ``Y``.  All
values are in nats.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import DimMismatchError
from .hermitian import (
    HermitianMatrix,
    PdMatrix,
    mat_log,
    trace_product,
)


@dataclasses.dataclass(frozen=True)
class DivergenceBreakdown:
    """The divergence value together with its three summands.

    ``value`` is computed as ``entropy_x - cross_term - trace_gap`` in a
    single rounding chain, so the identity between the fields is exact.
    """

    value: float
    entropy_x: float
    cross_term: float
    trace_gap: float


@dataclasses.dataclass(frozen=True)
class KleinCheck:
    """Outcome of a nonnegativity check on one divergence evaluation."""

    value: float
    passed: bool
    near_equal: bool


def entropy(x: PdMatrix) -> float:
    """Quantum entropy ``tr(X log X)``, evaluated as ``sum lambda log lambda``.

    Working on the eigenvalues directly avoids a matrix product and
    conditions better; agreement with the ``tr(X log X)`` route is covered
    by tests rather than assumed.
    """
    w = np.linalg.eigvalsh(x.entries)
    return float(np.sum(w * np.log(w)))


def entropy_gradient(y: PdMatrix) -> HermitianMatrix:
    """Gradient of the quantum entropy at ``Y``: ``log Y + I``."""
    return mat_log(y) + HermitianMatrix.identity(y.dim)


def relative_entropy(x: PdMatrix, y: PdMatrix) -> DivergenceBreakdown:
    """Quantum relative entropy of ``X`` with respect to ``Y``, with summands."""
    if x.dim != y.dim:
        raise DimMismatchError(f"dimension mismatch: {x.dim} vs {y.dim}")
    entropy_x = entropy(x)
    cross_term = trace_product(x, mat_log(y))
    trace_gap = x.trace() - y.trace()
    value = entropy_x - cross_term - trace_gap
    return DivergenceBreakdown(value, entropy_x, cross_term, trace_gap)


def bregman_residual(x: PdMatrix, y: PdMatrix) -> float:
    """Absolute gap between the divergence and its Bregman form.

    Compares ``D(X;Y)`` against
    ``phi(X) - [phi(Y) + <grad phi(Y), X - Y>]``; the two routes agree
    exactly in exact arithmetic.
    """
    if x.dim != y.dim:
        raise DimMismatchError(f"dimension mismatch: {x.dim} vs {y.dim}")
    direct = relative_entropy(x, y).value
    affine_gap = (
        entropy(x)
        - entropy(y)
        - trace_product(entropy_gradient(y), x.base - y.base)
    )
    return abs(direct - affine_gap)


def klein_check(x: PdMatrix, y: PdMatrix, tol: float) -> KleinCheck:
    """Check nonnegativity of ``D(X;Y)``.

    Passes iff the value is at least ``-tol``; when ``X`` and ``Y`` are
    numerically indistinguishable the value must also stay below ``tol``.
    """
    value = relative_entropy(x, y).value
    near = (x.base - y.base).frobenius_norm() <= 1e-10 * (1.0 + x.frobenius_norm())
    passed = value >= -tol and (not near or value <= tol)
    return KleinCheck(value, passed, near)
