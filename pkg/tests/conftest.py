import numpy as np

from qrelent import HermitianMatrix, validate_pd
from qrelent.hermitian import sample_hermitian, sample_pd, trial_rng  # noqa: F401


def as_pd(entries):
    return validate_pd(HermitianMatrix(entries))


def central_difference(f, point: HermitianMatrix, direction: HermitianMatrix, h=1e-5):
    """Independent directional-derivative oracle: (f(p+hV) - f(p-hV)) / 2h."""
    return (f(point + h * direction) - f(point - h * direction)) / (2.0 * h)


def unit_direction(rng, dim) -> HermitianMatrix:
    v = sample_hermitian(rng, dim, 3.0)
    return v * (1.0 / v.frobenius_norm())


def random_unitary(rng, dim) -> np.ndarray:
    """Unitary obtained from the eigendecomposition of a random self-adjoint matrix."""
    h = sample_hermitian(rng, dim, 3.0)
    _, u = np.linalg.eigh(h.entries)
    return u
