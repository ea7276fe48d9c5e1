"""Independent route to the channel: two-mode squeeze, then discard Rindler region II.

Nothing here calls the Kraus construction.  Each accelerated level ``l`` is
embedded into the (I, II) mode pair and region II is traced out; the
closed-form embedding is the default, the matrix exponential of the
squeezing generator is a cross-check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import expm

from .channel import ChannelSpec, apply_channel, kraus_multiparty
from .errors import DimensionError
from .fock import DensityMatrix, FockOperator, annihilation_operator


@dataclass(frozen=True)
class TwoModeState:
    """Amplitudes ``amp[n_I, n_II]`` of a two-mode Rindler state."""

    amplitudes: np.ndarray
    r: float

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))


def rindler_expand(level: int, r: float, cutoff: int) -> TwoModeState:
    """Expansion of the accelerated ``level`` as ``sum_n a_n |n+level>_I |n>_II``.

    ``a_n = tanh(r)**n / cosh(r)**(level+1) * sqrt((n+level)! / (n! level!))``,
    kept for ``n + level <= cutoff``.
    """
    if level < 0 or cutoff < level:
        raise ValueError("need 0 <= level <= cutoff")
    amp = np.zeros((cutoff + 1, cutoff + 1))
    n = np.arange(cutoff - level + 1)
    if r == 0:
        amp[level, 0] = 1.0
        return TwoModeState(amp, r)
    t, c = math.tanh(r), math.cosh(r)
    coeff = np.array([
        t ** int(k) / c ** (level + 1) * math.sqrt(math.comb(int(k) + level, level))
        for k in n])
    amp[n + level, n] = coeff
    return TwoModeState(amp, r)


def squeezing_operator(r: float, cutoff: int) -> FockOperator:
    """``exp[r (b_I^dag b_II^dag - b_I b_II)]`` on the truncated (cutoff+1)^2 two-mode space."""
    if r < 0 or cutoff < 1:
        raise ValueError("need r >= 0 and cutoff >= 1")
    b = annihilation_operator(cutoff + 1).data
    pair = np.kron(b, b)
    gen = r * (pair.T - pair).real
    side = cutoff + 1
    # the generator conserves n_I - n_II, so exponentiate each block on its own
    s = np.zeros((side * side, side * side))
    n_i, n_ii = np.divmod(np.arange(side * side), side)
    for delta in range(-cutoff, cutoff + 1):
        idx = np.nonzero(n_i - n_ii == delta)[0]
        s[np.ix_(idx, idx)] = expm(gen[np.ix_(idx, idx)])
    dims = (side, side)
    return FockOperator(s, dims, dims)


def _embedding_closed(r: float, d: int, K: int) -> np.ndarray:
    # isometry d -> (d+K) (x) (K+1), columns are the level expansions with n <= K
    v = np.zeros((d + K, K + 1, d))
    for lvl in range(d):
        amp = rindler_expand(lvl, r, lvl + K).amplitudes
        v[: lvl + K + 1, :, lvl] = amp[:, : K + 1]
    return v.reshape((d + K) * (K + 1), d)


def _embedding_squeezing(r: float, d: int, K: int, cutoff: int | None = None) -> np.ndarray:
    cutoff = max(2 * (d + K), 40) if cutoff is None else cutoff
    s = squeezing_operator(r, cutoff).data
    v = np.zeros((d + K, K + 1, d), dtype=complex)
    for lvl in range(d):
        col = s[:, lvl * (cutoff + 1)].reshape(cutoff + 1, cutoff + 1)
        v[:, :, lvl] = col[: d + K, : K + 1]
    return v.reshape((d + K) * (K + 1), d)


def isometry(spec: ChannelSpec, method: str = "closed", cutoff: int | None = None) -> np.ndarray:
    """Dilation map as a tensor ``W[kept, env, in]`` on the user party order.

    Kept slots are the inertial parties and the Rindler-I modes; the
    environment collects every Rindler-II mode.
    """
    if method not in ("closed", "squeezing"):
        raise ValueError(f"unknown embedding method {method!r}")
    factors, out_dims, is_env = [], [], []
    for i, d in enumerate(spec.local_dims):
        if i in spec.accelerated:
            j = spec.accelerated.index(i)
            r, K = spec.r[j], spec.cutoffs[j]
            if cutoff is not None:
                if cutoff < d - 1 + K:
                    raise ValueError(f"cutoff {cutoff} below d-1+K = {d - 1 + K}")
            if method == "closed":
                factors.append(_embedding_closed(r, d, K))
            else:
                factors.append(_embedding_squeezing(r, d, K, cutoff))
            out_dims += [d + K, K + 1]
            is_env += [False, True]
        else:
            factors.append(np.eye(d))
            out_dims.append(d)
            is_env.append(False)
    w = reduce(np.kron, factors)
    din = w.shape[1]
    w = w.reshape(tuple(out_dims) + (din,))
    kept = [i for i, e in enumerate(is_env) if not e]
    env = [i for i, e in enumerate(is_env) if e]
    w = w.transpose(kept + env + [len(out_dims)])
    dk = int(np.prod([out_dims[i] for i in kept]))
    de = int(np.prod([out_dims[i] for i in env]))
    return w.reshape(dk, de, din)


def trace_environment(w: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``Tr_env[W rho W^dag]`` without forming the enlarged state."""
    dk, de, din = w.shape
    t = (w.reshape(dk * de, din) @ rho).reshape(dk, de, din)
    return np.tensordot(t, w.conj(), axes=([1, 2], [1, 2]))


def dilate_and_trace(rho: DensityMatrix, spec: ChannelSpec, cutoff: int | None = None,
                     method: str = "closed") -> DensityMatrix:
    """Embed every accelerated party into its Rindler pair and trace out region II.

    The output lives on the inertial parties and the Rindler-I modes truncated
    to ``d + K`` levels, in the caller's party order.
    """
    if tuple(rho.dims) != spec.local_dims:
        raise DimensionError(f"state dims {rho.dims} do not match spec {spec.local_dims}")
    w = isometry(spec, method, cutoff)
    out = trace_environment(w, rho.data)
    out = 0.5 * (out + out.conj().T)
    return DensityMatrix(out, spec.dims_out, 1.0 - float(np.trace(out).real))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    diff = a - b
    return 0.5 * float(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())


def oracle_compare(rho: DensityMatrix, spec: ChannelSpec, method: str = "closed") -> float:
    """Trace distance between the Kraus channel output and the dilation output."""
    kraus_out = apply_channel(kraus_multiparty(spec), rho)
    dilated = dilate_and_trace(rho, spec, method=method)
    return trace_distance(kraus_out.data, dilated.data)
