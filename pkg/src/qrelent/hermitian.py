"""Dense self-adjoint matrix arithmetic and spectral matrix functions.

All matrices are complex Hermitian; real symmetric inputs are treated as
Hermitian matrices with zero imaginary part.  Values are immutable after
construction (the underlying arrays are marked read-only) and safe to share
across threads.  Every ingestion path symmetrizes, so drift from floating
point arithmetic never accumulates.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable, Sequence, Union

import numpy as np

from .errors import (
    ConvergenceError,
    DimMismatchError,
    DomainError,
    NotHermitianError,
)

# Frobenius tolerance for accepting a nearly-self-adjoint input.
SYMMETRIZE_RTOL = 1e-8
# Eigenvalue threshold for positive-definite validation; guards log(0).
PD_FLOOR = 1e-12
# Largest admissible eigenvalue of an exp argument (double overflows near e^709).
EXP_OVERFLOW_LIMIT = 700.0

_SEED_MASK = 0xFFFFFFFFFFFFFFFF


@dataclasses.dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A dense n-by-n self-adjoint matrix.

    The constructor accepts anything convertible to a square complex array,
    verifies that the anti-self-adjoint part is within ``SYMMETRIZE_RTOL``
    of zero (relative to the Frobenius norm), and stores the exactly
    symmetrized form ``(M + M*)/2``.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotHermitianError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise NotHermitianError("matrix dimension must be at least 1")
        if not np.all(np.isfinite(m)):
            raise NotHermitianError("matrix has non-finite entries")
        anti = np.linalg.norm(m - m.conj().T)
        if anti > SYMMETRIZE_RTOL * (1.0 + np.linalg.norm(m)):
            raise NotHermitianError(
                f"anti-self-adjoint part too large: ||M - M*||_F = {anti:.3e}"
            )
        sym = (m + m.conj().T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def zeros(cls, dim: int) -> "HermitianMatrix":
        return cls(np.zeros((dim, dim)))

    @classmethod
    def identity(cls, dim: int) -> "HermitianMatrix":
        return cls(np.eye(dim))

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "HermitianMatrix":
        return cls(np.diag(np.asarray(values, dtype=np.float64)))

    def trace(self) -> float:
        # Diagonal is exactly real after symmetrization.
        return float(np.trace(self.entries).real)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        _check_dims(self, other)
        return HermitianMatrix(self.entries + _entries_of(other))

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        _check_dims(self, other)
        return HermitianMatrix(self.entries - _entries_of(other))

    def __mul__(self, scalar: float) -> "HermitianMatrix":
        return HermitianMatrix(self.entries * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "HermitianMatrix":
        return HermitianMatrix(-self.entries)

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"


@dataclasses.dataclass(frozen=True, eq=False)
class PdMatrix:
    """A validated positive-definite matrix.

    ``min_eigenvalue`` is cached at validation time; construct through
    :func:`validate_pd` (or the convenience classmethods) so the cache is
    honest.
    """

    base: HermitianMatrix
    min_eigenvalue: float

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def entries(self) -> np.ndarray:
        return self.base.entries

    @classmethod
    def identity(cls, dim: int) -> "PdMatrix":
        return cls(HermitianMatrix.identity(dim), 1.0)

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "PdMatrix":
        return validate_pd(HermitianMatrix.diagonal(values))

    def trace(self) -> float:
        return self.base.trace()

    def frobenius_norm(self) -> float:
        return self.base.frobenius_norm()

    def scaled(self, t: float) -> "PdMatrix":
        """Scalar multiple ``t * A`` for t > 0; rescales the cached eigenvalue."""
        t = float(t)
        if t <= 0.0:
            raise DomainError(f"scaling a positive-definite matrix requires t > 0, got {t}")
        return PdMatrix(self.base * t, self.min_eigenvalue * t)

    def __repr__(self):
        return f"PdMatrix(dim={self.dim}, min_eigenvalue={self.min_eigenvalue:.3e})"


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues in ascending order and the unitary matrix of eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        """Return ``U diag(lambda) U*`` as a plain array."""
        u = self.vectors
        return (u * self.eigenvalues) @ u.conj().T


MatrixLike = Union[HermitianMatrix, PdMatrix]


def _entries_of(m: MatrixLike) -> np.ndarray:
    return m.entries


def _check_dims(a: MatrixLike, b: MatrixLike) -> None:
    if a.entries.shape != b.entries.shape:
        raise DimMismatchError(
            f"dimension mismatch: {a.entries.shape[0]} vs {b.entries.shape[0]}"
        )


def hermitian_part(m: MatrixLike) -> HermitianMatrix:
    """View a PdMatrix (or HermitianMatrix) as a plain HermitianMatrix."""
    if isinstance(m, PdMatrix):
        return m.base
    return m


def symmetrize(m) -> HermitianMatrix:
    """Return ``(M + M*)/2`` as a HermitianMatrix.

    Raises NotHermitianError when the anti-self-adjoint part of ``M``
    exceeds ``SYMMETRIZE_RTOL * (1 + ||M||_F)``.
    """
    return HermitianMatrix(np.asarray(m))


def eig(m: MatrixLike) -> SpectralDecomposition:
    """Hermitian eigendecomposition with ascending eigenvalues.

    The output satisfies the reconstruction and unitarity bounds
    ``||U L U* - M||_F <= 1e-10 (1 + ||M||_F)`` and
    ``||U* U - I||_F <= 1e-10 n``; a solver failure raises
    ConvergenceError with the numpy diagnostics attached.
    """
    entries = _entries_of(m)
    try:
        w, u = np.linalg.eigh(entries)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"eigen-decomposition failed for dim={entries.shape[0]}, "
            f"||M||_F={np.linalg.norm(entries):.3e}: {exc}"
        ) from exc
    w = np.asarray(w, dtype=np.float64)
    w.setflags(write=False)
    u.setflags(write=False)
    return SpectralDecomposition(w, u)


def _rebuild(u: np.ndarray, vals: np.ndarray) -> HermitianMatrix:
    # U diag(vals) U* with real vals; re-symmetrized so storage is exact.
    return HermitianMatrix((u * vals) @ u.conj().T)


def matrix_fn(m: HermitianMatrix, f: Callable[[float], float]) -> HermitianMatrix:
    """Apply a real scalar function through the spectral decomposition.

    ``f`` may be a vectorized ufunc or a plain scalar callable.  Raises
    DomainError when any eigenvalue falls outside the domain of ``f``
    (signalled by an exception from ``f`` or a non-finite value).
    """
    dec = eig(m)
    with np.errstate(all="ignore"):
        try:
            vals = np.asarray(f(dec.eigenvalues), dtype=np.float64)
            if vals.shape != dec.eigenvalues.shape:
                raise TypeError
        except (TypeError, ValueError, ZeroDivisionError, ArithmeticError):
            try:
                vals = np.asarray(
                    [float(f(x)) for x in dec.eigenvalues], dtype=np.float64
                )
            except (ValueError, ZeroDivisionError, ArithmeticError) as exc:
                raise DomainError(f"scalar function failed on an eigenvalue: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        bad = dec.eigenvalues[~np.isfinite(vals)]
        raise DomainError(f"eigenvalues outside the function domain: {bad}")
    return _rebuild(dec.vectors, vals)


def mat_exp(m: HermitianMatrix) -> PdMatrix:
    """Spectral matrix exponential; the result is always positive definite.

    Raises OverflowError when any eigenvalue exceeds ``EXP_OVERFLOW_LIMIT``;
    failing loudly beats returning infinities.
    """
    dec = eig(m)
    top = float(dec.eigenvalues[-1])
    if top > EXP_OVERFLOW_LIMIT:
        raise OverflowError(
            f"eigenvalue {top:.6g} exceeds the exp-overflow guard {EXP_OVERFLOW_LIMIT}"
        )
    w = np.exp(dec.eigenvalues)
    if w[0] == 0.0:
        raise DomainError(
            f"exponential underflowed to a singular matrix (eigenvalue {dec.eigenvalues[0]:.6g})"
        )
    return PdMatrix(_rebuild(dec.vectors, w), float(w[0]))


def mat_log(a: PdMatrix) -> HermitianMatrix:
    """Spectral matrix logarithm of a positive-definite matrix."""
    dec = eig(a)
    if dec.eigenvalues[0] <= PD_FLOOR:
        raise DomainError(
            f"matrix logarithm needs eigenvalues above {PD_FLOOR:.0e}, "
            f"got {dec.eigenvalues[0]:.6g}"
        )
    return _rebuild(dec.vectors, np.log(dec.eigenvalues))


def trace_product(a: MatrixLike, b: MatrixLike) -> float:
    """The trace inner product ``tr(AB)`` of two self-adjoint matrices.

    The result is real up to rounding; the imaginary residue is checked
    against ``1e-10 (1 + ||A||_F ||B||_F)`` and then discarded.
    """
    _check_dims(a, b)
    ae, be = _entries_of(a), _entries_of(b)
    # vdot conjugates its first argument: sum conj(B_ij) A_ij = tr(AB).
    t = np.vdot(be, ae)
    bound = 1e-10 * (1.0 + np.linalg.norm(ae) * np.linalg.norm(be))
    if abs(t.imag) > bound:
        raise NotHermitianError(
            f"trace product has imaginary residue {t.imag:.3e} beyond {bound:.3e}"
        )
    return float(t.real)


def validate_pd(m: MatrixLike) -> PdMatrix:
    """Validate positive definiteness and cache the smallest eigenvalue.

    Raises DomainError when any eigenvalue is at or below ``PD_FLOOR``.
    """
    h = hermitian_part(m)
    smallest = float(np.linalg.eigvalsh(h.entries)[0])
    if smallest <= PD_FLOOR:
        raise DomainError(
            f"matrix is not positive definite: smallest eigenvalue {smallest:.6g}"
        )
    return PdMatrix(h, smallest)


def seeded_rng(seed: int) -> np.random.Generator:
    """PCG64 generator from a 64-bit seed (negative seeds wrap to unsigned)."""
    return np.random.default_rng(int(seed) & _SEED_MASK)


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for trial ``index`` of a suite keyed by ``seed``.

    Derived from the pair, so trials are reproducible regardless of
    evaluation order or parallelism.
    """
    return np.random.default_rng([int(seed) & _SEED_MASK, int(index)])


def _ginibre(rng: np.random.Generator, dim: int) -> np.ndarray:
    # Independent standard complex normal entries: E|g|^2 = 1.
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g / math.sqrt(2.0)


def sample_pd(rng: np.random.Generator, dim: int, spread: float) -> PdMatrix:
    """Draw ``G G*/dim + spread I`` with standard complex normal ``G``."""
    if dim < 1:
        raise DomainError(f"dimension must be at least 1, got {dim}")
    if spread <= 0.0:
        raise DomainError(f"spread must be positive, got {spread}")
    g = _ginibre(rng, dim)
    m = g @ g.conj().T / dim + spread * np.eye(dim)
    return validate_pd(symmetrize(m))


def random_pd(dim: int, seed: int, spread: float) -> PdMatrix:
    """Deterministic random positive-definite matrix.

    The result is a pure function of ``(dim, seed, spread)``: a Ginibre
    matrix ``G`` with standard complex normal entries is drawn from the
    seeded generator and the sample is ``G G*/dim + spread I``, so the
    smallest eigenvalue is at least ``spread``.
    """
    return sample_pd(seeded_rng(seed), dim, spread)


def sample_hermitian(
    rng: np.random.Generator, dim: int, radius: float = 3.0
) -> HermitianMatrix:
    """Draw a random self-adjoint matrix, rescaled to spectral radius <= radius."""
    g = _ginibre(rng, dim)
    h = HermitianMatrix((g + g.conj().T) / 2.0)
    rho = float(np.max(np.abs(np.linalg.eigvalsh(h.entries))))
    if rho > radius:
        h = h * (radius / rho)
    return h
