"""Random and preset states."""
from __future__ import annotations

import numpy as np

from .fock import DensityMatrix, as_dims, pure


def haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def haar_pure(dims, rng: np.random.Generator) -> DensityMatrix:
    dims = as_dims(dims)
    return pure(haar_vector(int(np.prod(dims)), rng), dims)


def random_mixed(dims, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Normalized G G† with a complex Gaussian G of the given rank (full by default)."""
    dims = as_dims(dims)
    side = int(np.prod(dims))
    rank = side if rank is None else rank
    g = rng.normal(size=(side, rank)) + 1j * rng.normal(size=(side, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, dims)


def random_state(dims, rng: np.random.Generator) -> DensityMatrix:
    """Haar pure or full-rank mixed with equal probability."""
    if rng.random() < 0.5:
        return haar_pure(dims, rng)
    return random_mixed(dims, rng)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def bell_phi_plus() -> DensityMatrix:
    return pure([1, 0, 0, 1], (2, 2))


def bell_psi_plus() -> DensityMatrix:
    return pure([0, 1, 1, 0], (2, 2))


def ghz3() -> DensityMatrix:
    v = np.zeros(8)
    v[0] = v[7] = 1
    return pure(v, (2, 2, 2))


def w3() -> DensityMatrix:
    v = np.zeros(8)
    v[[1, 2, 4]] = 1
    return pure(v, (2, 2, 2))


PRESETS = {
    "bell-phi-plus": bell_phi_plus,
    "bell-psi-plus": bell_psi_plus,
    "ghz3": ghz3,
    "w3": w3,
}
