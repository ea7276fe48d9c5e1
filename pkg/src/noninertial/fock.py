"""Dense linear algebra on truncated Fock spaces.

Composite indices are row-major over the subsystem order: the leftmost
subsystem varies slowest, exactly as ``np.kron`` lays out its factors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

TOL_HERM = 1e-10
TOL_PSD = 1e-10
TOL_EIG = 1e-12


def _scale(mat: np.ndarray) -> float:
    return max(float(np.abs(mat).max(initial=0.0)), np.finfo(float).tiny)


def as_dims(dims: Iterable[int]) -> tuple[int, ...]:
    """Validate a dimension signature and return it as a tuple."""
    out = tuple(int(d) for d in dims)
    if not out:
        raise DimensionError("a signature needs at least one subsystem")
    if any(d < 1 for d in out):
        raise DimensionError(f"subsystem dimensions must be >= 1, got {out}")
    return out


@dataclass(frozen=True)
class FockOperator:
    """Linear map between (possibly composite) truncated Fock spaces.

    ``dims_in``/``dims_out`` are the subsystem signatures; a plain single-mode
    operator has one entry in each.
    """

    data: np.ndarray
    dims_in: tuple[int, ...]
    dims_out: tuple[int, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims_in", as_dims(self.dims_in))
        object.__setattr__(self, "dims_out", as_dims(self.dims_out))
        if data.shape != (self.dim_out, self.dim_in):
            raise DimensionError(
                f"matrix shape {data.shape} does not match "
                f"{self.dims_out} x {self.dims_in}")

    @property
    def dim_in(self) -> int:
        return int(np.prod(self.dims_in))

    @property
    def dim_out(self) -> int:
        return int(np.prod(self.dims_out))

    @property
    def dag(self) -> "FockOperator":
        return FockOperator(self.data.conj().T, self.dims_out, self.dims_in)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        if self.dim_in != other.dim_out:
            raise DimensionError("operator dimensions do not compose")
        return FockOperator(self.data @ other.data, other.dims_in, self.dims_out)


@dataclass(frozen=True)
class DensityMatrix:
    """Dense Hermitian state with a subsystem signature.

    ``trace_deficit`` records how much probability a truncated channel is
    known to have dropped; ``target_trace`` is ``1 - trace_deficit``.
    """

    data: np.ndarray
    dims: tuple[int, ...]
    trace_deficit: float = 0.0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", as_dims(self.dims))
        side = int(np.prod(self.dims))
        if data.shape != (side, side):
            raise DimensionError(
                f"density matrix of shape {data.shape} does not match dims {self.dims}")

    @property
    def side(self) -> int:
        return self.data.shape[0]

    @property
    def target_trace(self) -> float:
        return 1.0 - self.trace_deficit

    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def normalized(self) -> "DensityMatrix":
        return DensityMatrix(self.data / self.trace(), self.dims)

    def check(self, tol_trace: float = 1e-9) -> None:
        """Raise ``ValueError`` if the state violates Hermiticity, trace or PSD tolerances."""
        scale = _scale(self.data)
        asym = np.abs(self.data - self.data.conj().T).max()
        if asym > TOL_HERM * scale:
            raise ValueError(f"not Hermitian: asymmetry {asym:.3e}")
        if abs(self.trace() - self.target_trace) > tol_trace:
            raise ValueError(
                f"trace {self.trace():.15g} differs from target {self.target_trace:.15g}")
        lo = np.linalg.eigvalsh(self.data).min()
        if lo < -TOL_PSD * scale:
            raise ValueError(f"not positive semidefinite: min eigenvalue {lo:.3e}")


def pure(vec: Sequence[complex], dims: Iterable[int]) -> DensityMatrix:
    """Projector onto a normalized copy of ``vec``."""
    v = np.asarray(vec, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), tuple(dims))


def basis_state(level: int | Sequence[int], dims: Iterable[int]) -> DensityMatrix:
    """|l><l| for a single index or a per-subsystem tuple of levels."""
    dims = as_dims(dims)
    side = int(np.prod(dims))
    if np.ndim(level) == 0:
        idx = int(level)
        if not 0 <= idx < side:
            raise ValueError(f"level {idx} outside a space of dimension {side}")
    else:
        idx = np.ravel_multi_index(tuple(level), dims)
    v = np.zeros(side, dtype=complex)
    v[idx] = 1.0
    return DensityMatrix(np.outer(v, v), dims)


def creation_operator(dim_in: int) -> FockOperator:
    """b† from ``dim_in`` levels into ``dim_in + 1`` levels, so nothing is cut off."""
    if dim_in < 1:
        raise DimensionError("dim_in must be >= 1")
    data = np.zeros((dim_in + 1, dim_in), dtype=complex)
    n = np.arange(dim_in)
    data[n + 1, n] = np.sqrt(n + 1.0)
    return FockOperator(data, (dim_in,), (dim_in + 1,))


def annihilation_operator(dim: int) -> FockOperator:
    """Square truncated b on ``dim`` levels."""
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    return FockOperator(np.diag(np.sqrt(np.arange(1.0, dim)), 1), (dim,), (dim,))


def number_operator(dim: int) -> FockOperator:
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    return FockOperator(np.diag(np.arange(dim, dtype=float)), (dim,), (dim,))


def identity(dims: Iterable[int]) -> FockOperator:
    dims = as_dims(dims)
    return FockOperator(np.eye(int(np.prod(dims))), dims, dims)


def tensor(factors):
    """Kronecker product of operators or of states, in the order given."""
    factors = list(factors)
    if not factors:
        raise ValueError("tensor needs at least one factor")
    if all(isinstance(f, DensityMatrix) for f in factors):
        data = reduce(np.kron, (f.data for f in factors))
        return DensityMatrix(data, sum((f.dims for f in factors), ()))
    if all(isinstance(f, FockOperator) for f in factors):
        data = reduce(np.kron, (f.data for f in factors))
        return FockOperator(data,
                            sum((f.dims_in for f in factors), ()),
                            sum((f.dims_out for f in factors), ()))
    raise TypeError("tensor factors must all be DensityMatrix or all FockOperator")


def _check_subsystems(indices, n: int) -> list[int]:
    idx = sorted({int(i) for i in indices})
    if not idx:
        raise ValueError("subsystem set must not be empty")
    if idx[0] < 0 or idx[-1] >= n:
        raise IndexError(f"subsystem index out of range for {n} subsystems: {idx}")
    return idx


def partial_trace_array(data: np.ndarray, dims: Sequence[int], keep) -> np.ndarray:
    """Partial trace of a raw matrix, keeping ``keep`` in their original order."""
    n = len(dims)
    keep = _check_subsystems(keep, n)
    letters = [chr(ord("a") + i) for i in range(2 * n)]
    row = letters[:n]
    col = [row[i] if i not in keep else letters[n + i] for i in range(n)]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    expr = "".join(row) + "".join(col) + "->" + "".join(out)
    t = np.einsum(expr, data.reshape(tuple(dims) * 2))
    side = int(np.prod([dims[i] for i in keep]))
    return t.reshape(side, side)


def partial_trace(state: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``."""
    keep = _check_subsystems(keep, len(state.dims))
    data = partial_trace_array(state.data, state.dims, keep)
    return DensityMatrix(data, tuple(state.dims[i] for i in keep), state.trace_deficit)


def permute_subsystems(data: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder subsystems of a square matrix; ``order[j]`` is the old index placed at slot j."""
    n = len(dims)
    t = data.reshape(tuple(dims) * 2)
    t = t.transpose(list(order) + [n + i for i in order])
    side = data.shape[0]
    return t.reshape(side, side)


def hermitian_eigensystem(mat) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and eigenvectors of a Hermitian matrix.

    Accepts a ``DensityMatrix``, a square ``FockOperator`` or a raw array.
    """
    data = getattr(mat, "data", mat)
    data = np.asarray(data, dtype=complex)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise DimensionError("eigensystem needs a square matrix")
    scale = _scale(data)
    if np.abs(data - data.conj().T).max(initial=0.0) > TOL_HERM * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(data)
    return vals, vecs
