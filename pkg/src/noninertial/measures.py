"""Resource quantifiers and distances on dense states.

Entropies use base-2 logarithms.  Functions accept a ``DensityMatrix`` or a
raw square array; subsystem-aware ones need the ``dims`` of a
``DensityMatrix``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionError, UnsupportedDimensionError
from .fock import DensityMatrix

EIG_ZERO = 1e-14


def _data(rho) -> np.ndarray:
    return np.asarray(getattr(rho, "data", rho), dtype=complex)


def _eigvals(mat: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))


def _entropy_from_eigs(vals: np.ndarray) -> float:
    p = vals[vals > EIG_ZERO]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho) -> float:
    return _entropy_from_eigs(_eigvals(_data(rho)))


def purity(rho) -> float:
    m = _data(rho)
    return float(np.real(np.vdot(m, m)))


def l1_coherence(rho) -> float:
    """Sum of absolute off-diagonal entries in the Fock basis."""
    m = _data(rho)
    return float(np.abs(m).sum() - np.abs(np.diag(m)).sum())


def relative_entropy_coherence(rho) -> float:
    """S(diag rho) - S(rho)."""
    m = _data(rho)
    diag = np.clip(np.diag(m).real, 0.0, None)
    return max(_entropy_from_eigs(diag) - _entropy_from_eigs(_eigvals(m)), 0.0)


def partial_transpose(rho: DensityMatrix, subsystems) -> np.ndarray:
    """Transpose the listed subsystems (row/column index swap per subsystem)."""
    dims = tuple(rho.dims)
    n = len(dims)
    subs = {int(i) for i in subsystems}
    if not subs or min(subs) < 0 or max(subs) >= n:
        raise DimensionError(f"bad bipartition {sorted(subs)} for {n} subsystems")
    t = rho.data.reshape(dims * 2)
    axes = [n + i if i in subs else i for i in range(n)] + \
           [i if i in subs else n + i for i in range(n)]
    return t.transpose(axes).reshape(rho.data.shape)


def negativity(rho: DensityMatrix, bipartition) -> float:
    """(||rho^T_B||_1 - 1) / 2 with ``bipartition`` naming the transposed subsystems."""
    vals = _eigvals(partial_transpose(rho, bipartition))
    return max(float((np.abs(vals).sum() - vals.sum()) / 2), 0.0)


def min_pt_eigenvalue(rho: DensityMatrix, bipartition) -> float:
    return float(_eigvals(partial_transpose(rho, bipartition)).min())


def _check_pair(rho, sigma):
    a, b = _data(rho), _data(sigma)
    if a.shape != b.shape:
        raise DimensionError(f"states of shapes {a.shape} and {b.shape}")
    return a, b


def trace_distance(rho, sigma) -> float:
    a, b = _check_pair(rho, sigma)
    return 0.5 * float(np.abs(_eigvals(a - b)).sum())


def hilbert_schmidt_distance(rho, sigma) -> float:
    a, b = _check_pair(rho, sigma)
    return float(np.linalg.norm(a - b))


def _sqrtm_psd(m: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity (squared convention)."""
    a, b = _check_pair(rho, sigma)
    sv = np.linalg.svd(_sqrtm_psd(a) @ _sqrtm_psd(b), compute_uv=False)
    return float(min(sv.sum() ** 2, 1.0))


def bures_distance(rho, sigma) -> float:
    return float(np.sqrt(max(2.0 * (1.0 - np.sqrt(fidelity(rho, sigma))), 0.0)))


def relative_entropy(rho, sigma) -> float:
    """S(rho || sigma) in bits; ``inf`` when supp(rho) is not inside supp(sigma)."""
    a, b = _check_pair(rho, sigma)
    va, ua = np.linalg.eigh(0.5 * (a + a.conj().T))
    vb, ub = np.linalg.eigh(0.5 * (b + b.conj().T))
    kernel = ub[:, vb <= EIG_ZERO]
    if kernel.size and np.real(np.trace(kernel.conj().T @ a @ kernel)) > 1e-12:
        return float("inf")
    keep = vb > EIG_ZERO
    log_b = (ub[:, keep] * np.log2(vb[keep])) @ ub[:, keep].conj().T
    pa = va[va > EIG_ZERO]
    return max(float(np.sum(pa * np.log2(pa)) - np.real(np.trace(a @ log_b))), 0.0)


def _equatorial_state(params: np.ndarray) -> np.ndarray:
    # z = 0 loses nothing: only tau's coherence enters the feasibility condition
    a, phi = params
    u = np.sin(a) ** 2
    t01 = 0.5 * u * np.exp(-1j * phi)
    return np.array([[0.5, t01], [np.conj(t01), 0.5]])


def robustness_coherence_qubit(rho, tol: float = 1e-12, penalty: float = 10.0) -> float:
    """Generalized robustness of coherence of a qubit by direct search over the noise state.

    For a candidate noise state tau the best weight is the s >= 0 that
    cancels the off-diagonal of ``rho + s tau``; any leftover off-diagonal is
    penalized exactly.  A coarse grid seeds Nelder-Mead.  The returned value
    is the weight of an exactly feasible tau (phase aligned after the
    search), so it is a certified upper bound that meets the optimum at
    convergence.
    """
    m = _data(rho)
    if m.shape != (2, 2):
        raise UnsupportedDimensionError("robustness is implemented for qubits only")
    c = m[0, 1]
    if abs(c) <= tol:
        return 0.0

    def objective(params):
        a, phi = params
        t01 = 0.5 * math.sin(a) ** 2 * cmath.exp(-1j * phi)
        mag2 = abs(t01) ** 2
        if mag2 < 1e-300:
            return 1e6
        s = max(0.0, -np.real(c * np.conj(t01)) / mag2)
        return s + penalty * abs(c + s * t01)

    grid = [np.array([a, p])
            for a in np.linspace(0.15, np.pi / 2, 4)
            for p in np.linspace(0, 2 * np.pi, 12, endpoint=False)]
    best = None
    for start in sorted(grid, key=objective)[:1]:
        res = minimize(objective, start, method="Nelder-Mead",
                       options={"xatol": 1e-11, "fatol": 1e-14, "maxiter": 4000})
        if best is None or res.fun < best.fun:
            best = res
    tau = _equatorial_state(best.x)
    mod = abs(tau[0, 1])
    s = abs(c) / mod
    tau[0, 1] = -mod * c / abs(c)
    tau[1, 0] = np.conj(tau[0, 1])
    mixed = (m + s * tau) / (1 + s)
    if abs(mixed[0, 1]) > 1e-12 * max(1.0, s):
        raise RuntimeError("robustness search did not reach a feasible mixture")
    return float(s)


MEASURES = {
    "l1_coherence": l1_coherence,
    "relative_entropy_coherence": relative_entropy_coherence,
    "von_neumann_entropy": von_neumann_entropy,
    "purity": purity,
    "negativity": negativity,
}

DISTANCES = {
    "trace": trace_distance,
    "bures": bures_distance,
    "relative-entropy": relative_entropy,
    "hilbert-schmidt": hilbert_schmidt_distance,
}


@dataclass
class MeasureReport:
    values: dict[str, float]
    state_id: str = ""
    notes: list[str] = field(default_factory=list)


def measure_report(rho: DensityMatrix, names, bipartition=None, state_id: str = "") -> MeasureReport:
    """Evaluate the named measures; values within 1e-12 below zero are clamped to 0."""
    values = {}
    for name in names:
        if name not in MEASURES:
            raise KeyError(f"unknown measure {name!r}; choose from {sorted(MEASURES)}")
        if name == "negativity":
            part = bipartition if bipartition is not None else [len(rho.dims) - 1]
            v = negativity(rho, part)
        else:
            v = MEASURES[name](rho)
        if -1e-12 <= v < 0:
            v = 0.0
        values[name] = v
    return MeasureReport(values, state_id)
