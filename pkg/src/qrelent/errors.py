"""Exception types shared across the package.

Overflow conditions raise the builtin :class:`OverflowError`; file-system
failures raise :class:`OSError`.  Everything domain-specific derives from
:class:`QrelentError`.
"""


class QrelentError(Exception):
    """Base class for all errors raised by this package."""


class NotHermitianError(QrelentError):
    """Input matrix is too far from self-adjoint to symmetrize."""


class DimMismatchError(QrelentError):
    """Operands have incompatible dimensions."""


class DomainError(QrelentError):
    """A matrix argument lies outside the domain of the requested function."""


class ConvergenceError(QrelentError):
    """The eigenvalue solver failed to converge."""


class MatrixParseError(QrelentError):
    """A matrix file does not conform to the JSON matrix format."""


class SegmentEvaluationError(QrelentError):
    """A segment-test evaluation failed; carries the offending mixture parameter."""

    def __init__(self, t: float, message: str):
        super().__init__(f"evaluation failed at t={t!r}: {message}")
        self.t = t
