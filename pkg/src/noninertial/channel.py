"""Kraus representation of the noninertial channel and its CPTP checks.

A single accelerated mode with input level ``n`` is sent to ``n + k`` with
amplitude ``sqrt(C(n+k, k)) * tanh(r)**k / cosh(r)**(n+1)``; several
accelerated parties get a tensor product of these factors and inertial
parties get the identity.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from . import kernels
from .errors import BudgetError, DimensionError, DivergenceError
from .fock import TOL_PSD, DensityMatrix, FockOperator, as_dims, hermitian_eigensystem
from .report import PropertyReport
from .states import random_state

R_MAX = 2.5
DEFAULT_EPSILON = 1e-10
MAX_KRAUS_OPS = 200_000
MAX_KRAUS_ELEMENTS = 50_000_000
MAX_CHOI_SIDE = 4096
MAX_STATE_SIDE = 8192


def r_from_omega(omega: float) -> float:
    """Acceleration parameter for a dimensionless Rindler frequency.

    Solves ``cosh r = (1 - exp(-2 pi omega))**-1/2`` through the equivalent
    ``sinh r = expm1(2 pi omega)**-1/2``, which stays accurate as omega grows.
    """
    omega = float(omega)
    if not omega > 0:
        raise DivergenceError(f"r diverges for omega <= 0 (got {omega})")
    return math.asinh(1.0 / math.sqrt(math.expm1(2 * math.pi * omega)))


@dataclass(frozen=True)
class AccelerationParam:
    r: float
    omega: float | None = None

    def __post_init__(self):
        if self.omega is not None:
            r = r_from_omega(self.omega)
            if abs(math.cosh(self.r) - math.cosh(r)) > 1e-12:
                raise ValueError(f"r={self.r} inconsistent with omega={self.omega}")
        if not math.isfinite(self.r):
            raise DivergenceError("infinite acceleration cannot be represented")
        if self.r < 0:
            raise ValueError("r must be nonnegative")

    @classmethod
    def from_omega(cls, omega: float) -> "AccelerationParam":
        return cls(r_from_omega(omega), float(omega))


def kraus_coefficients(r: float, d_in: int, K: int) -> np.ndarray:
    """Table ``c[k, n]`` of the amplitude carrying level ``n`` to ``n + k``, k = 0..K."""
    if r < 0 or d_in < 1 or K < 0:
        raise ValueError("need r >= 0, d_in >= 1, K >= 0")
    c = np.zeros((K + 1, d_in))
    if r == 0:
        c[0, :] = 1.0
        return c
    k = np.arange(K + 1)[:, None]
    n = np.arange(d_in)[None, :]
    log_c = (0.5 * (gammaln(n + k + 1) - gammaln(k + 1) - gammaln(n + 1))
             + k * math.log(math.tanh(r)) - (n + 1) * math.log(math.cosh(r)))
    return np.exp(log_c)


def kraus_single(r: float, d_in: int, K: int) -> list[FockOperator]:
    """The K+1 single-mode Kraus operators, each of shape (d_in + K) x d_in."""
    c = kraus_coefficients(r, d_in, K)
    ops = []
    n = np.arange(d_in)
    for k in range(K + 1):
        a = np.zeros((d_in + K, d_in), dtype=complex)
        a[n + k, n] = c[k]
        ops.append(FockOperator(a, (d_in,), (d_in + K,)))
    return ops


def _tail_terms(x: float, level: int, kmin: int) -> np.ndarray:
    # weights C(k+l, l) x^k (1-x)^(l+1) for k >= kmin until they are negligible
    chunks = []
    start = kmin
    log1mx = math.log1p(-x)
    logx = math.log(x)
    while True:
        k = np.arange(start, start + 4096, dtype=float)
        logw = (gammaln(k + level + 1) - gammaln(k + 1) - math.lgamma(level + 1)
                + k * logx + (level + 1) * log1mx)
        w = np.exp(logw)
        chunks.append(w)
        # past the mode the weights only shrink; stop once they are far below the sum
        mode = level * x / (1 - x)
        if k[-1] > mode and w[-1] < 1e-20 * max(sum(c.sum() for c in chunks), 1e-300):
            break
        start += 4096
    return np.concatenate(chunks)


def truncation_tail(r: float, level: int, K: int) -> float:
    """Probability weight lost for Fock input ``level`` when Kraus indices stop at K.

    Summed directly as the remainder of the negative-binomial series (no
    ``1 - head`` cancellation), so tiny tails keep full relative precision.
    """
    if r < 0 or level < 0 or K < 0:
        raise ValueError("need r >= 0, level >= 0, K >= 0")
    x = math.tanh(r) ** 2
    if x == 0.0:
        return 0.0
    w = _tail_terms(x, level, K + 1)
    return float(np.sum(w[::-1]))


def tail_profile(r: float, level: int, kmax: int) -> np.ndarray:
    """``tail(r, level, K)`` for K = 0..kmax in one pass (suffix sums)."""
    x = math.tanh(r) ** 2
    if x == 0.0:
        return np.zeros(kmax + 1)
    w = _tail_terms(x, level, 0)
    if len(w) < kmax + 2:
        w = np.concatenate([w, np.zeros(kmax + 2 - len(w))])
    suffix = np.cumsum(w[::-1])[::-1]
    return suffix[1:kmax + 2]


def choose_cutoff(r: float, d: int, epsilon: float = DEFAULT_EPSILON) -> int:
    """Smallest K whose worst-level tail over levels 0..d-1 is at most epsilon."""
    if r == 0:
        return 0
    kmax = 64
    while True:
        worst = np.max([tail_profile(r, lvl, kmax) for lvl in range(d)], axis=0)
        hits = np.nonzero(worst <= epsilon)[0]
        if hits.size:
            return int(hits[0])
        kmax *= 2
        if kmax > 1 << 20:
            raise BudgetError(f"no cutoff reaches epsilon={epsilon} at r={r}")


@dataclass(frozen=True)
class ChannelSpec:
    """N parties with local dimensions; some of them accelerated with their own r and cutoff."""

    local_dims: tuple[int, ...]
    accelerated: tuple[int, ...]
    r: tuple[float, ...]
    cutoffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "local_dims", as_dims(self.local_dims))
        acc = tuple(int(m) for m in self.accelerated)
        r = tuple(float(getattr(x, "r", x)) for x in self.r)
        cut = tuple(int(k) for k in self.cutoffs)
        object.__setattr__(self, "accelerated", acc)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "cutoffs", cut)
        n = len(self.local_dims)
        if not acc or len(set(acc)) != len(acc):
            raise ValueError("need at least one distinct accelerated party")
        if any(m < 0 or m >= n for m in acc):
            raise ValueError(f"accelerated party index out of range for {n} parties")
        if len(r) != len(acc) or len(cut) != len(acc):
            raise ValueError("one r and one cutoff per accelerated party")
        for m, rm, km in zip(acc, r, cut):
            if not math.isfinite(rm):
                raise DivergenceError("r = inf is not representable under truncation")
            if rm < 0 or rm > R_MAX:
                raise ValueError(f"r must lie in [0, {R_MAX}], got {rm}")
            if km < 0:
                raise ValueError("cutoffs must be >= 0")
            if self.local_dims[m] < 2:
                raise ValueError("accelerated parties need local dimension >= 2")

    @classmethod
    def build(cls, local_dims, accelerated, r, epsilon: float = DEFAULT_EPSILON,
              cutoffs=None) -> "ChannelSpec":
        """A channel description with certified cutoffs: each K_m is the smallest meeting ``epsilon``."""
        local_dims = as_dims(local_dims)
        accelerated = tuple(accelerated)
        if np.ndim(r) == 0:
            r = (r,) * len(accelerated)
        r = tuple(float(getattr(x, "r", x)) for x in r)
        if cutoffs is None:
            cutoffs = tuple(choose_cutoff(rm, local_dims[m], epsilon)
                            for m, rm in zip(accelerated, r))
        elif np.ndim(cutoffs) == 0:
            cutoffs = (int(cutoffs),) * len(accelerated)
        return cls(local_dims, accelerated, r, cutoffs)

    @property
    def n_parties(self) -> int:
        return len(self.local_dims)

    @property
    def dims_out(self) -> tuple[int, ...]:
        out = list(self.local_dims)
        for m, k in zip(self.accelerated, self.cutoffs):
            out[m] += k
        return tuple(out)

    @property
    def order(self) -> tuple[int, ...]:
        """Internal subsystem order: inertial parties first, accelerated last."""
        inertial = [i for i in range(self.n_parties) if i not in self.accelerated]
        return tuple(inertial) + self.accelerated

    def tails(self) -> list[float]:
        """Worst-level tail per accelerated party."""
        return [max(truncation_tail(rm, lvl, km) for lvl in range(self.local_dims[m]))
                for m, rm, km in zip(self.accelerated, self.r, self.cutoffs)]

    def tail_bound(self) -> float:
        """Upper bound on the trace deficit for any input state."""
        return 1.0 - float(np.prod([1.0 - t for t in self.tails()]))


class KrausSet:
    """Ordered Kraus family of one channel instance.

    Sets built by :func:`kraus_multiparty` keep their per-party factors and
    only materialize the full operator list on demand; ``ops`` act on the
    internal subsystem order (inertial first) recorded in ``order``.
    """

    def __init__(self, ops=None, dims_in=None, dims_out=None, spec: ChannelSpec | None = None,
                 factors=None, order=None):
        self.spec = spec
        self.factors = factors
        if ops is not None:
            ops = [op if isinstance(op, FockOperator) else
                   FockOperator(op, dims_in, dims_out) for op in ops]
            if not ops:
                raise ValueError("empty Kraus family")
            if any(op.data.shape != ops[0].data.shape for op in ops):
                raise DimensionError("Kraus operators must share a shape")
            self.__dict__["ops"] = ops
            dims_in = ops[0].dims_in if dims_in is None else as_dims(dims_in)
            dims_out = ops[0].dims_out if dims_out is None else as_dims(dims_out)
        self.dims_in = as_dims(dims_in)
        self.dims_out = as_dims(dims_out)
        n = len(self.dims_in)
        self.order = tuple(range(n)) if order is None else tuple(order)
        self.completeness = self._completeness()
        self.completeness_defect = float(np.abs(self.completeness - np.eye(len(self.completeness))).max())

    @property
    def structured(self) -> bool:
        return self.factors is not None

    def __len__(self) -> int:
        if self.structured:
            return int(np.prod([len(f) for f in self.factors]))
        return len(self.ops)

    @cached_property
    def ops(self) -> list[FockOperator]:
        """Full operators in lexicographic multi-index order, on the internal order."""
        din = int(np.prod(self.dims_in))
        dout = int(np.prod(self.dims_out))
        if len(self) * din * dout > MAX_KRAUS_ELEMENTS:
            raise BudgetError(f"{len(self)} Kraus operators of size {dout}x{din} exceed budget")
        inertial = [self.dims_in[i] for i in self.order[:len(self.order) - len(self.factors)]]
        eye = np.eye(int(np.prod(inertial))) if inertial else np.eye(1)
        internal_in = tuple(self.dims_in[i] for i in self.order)
        internal_out = tuple(self.dims_out[i] for i in self.order)
        ops = []
        for combo in itertools.product(*self.factors):
            data = reduce(np.kron, [eye] + [f.data for f in combo])
            ops.append(FockOperator(data, internal_in, internal_out))
        return ops

    def without(self, index: int) -> "KrausSet":
        """Copy with operator ``index`` removed (fault injection)."""
        ops = [op for i, op in enumerate(self.ops) if i != index]
        return KrausSet(ops, spec=self.spec, order=self.order,
                        dims_in=self.dims_in, dims_out=self.dims_out)

    def _completeness(self) -> np.ndarray:
        # sum_k A_k^dag A_k on the user-order input space
        if self.structured:
            blocks = []
            for i, d in enumerate(self.dims_in):
                if i in self.spec.accelerated:
                    f = self.factors[self.spec.accelerated.index(i)]
                    blocks.append(sum(op.data.conj().T @ op.data for op in f))
                else:
                    blocks.append(np.eye(d))
            return reduce(np.kron, blocks)
        a = np.stack([op.data for op in self.ops])
        m = np.einsum("kij,kil->jl", a.conj(), a)
        if self.order != tuple(range(len(self.order))):
            from .fock import permute_subsystems
            internal = tuple(self.dims_in[i] for i in self.order)
            m = permute_subsystems(m, internal, np.argsort(self.order))
        return m


def kraus_multiparty(spec: ChannelSpec, max_ops: int = MAX_KRAUS_OPS) -> KrausSet:
    """Kraus family ``I (x) A_k1 (x) ... (x) A_kM`` for all multi-indices up to the cutoffs."""
    count = int(np.prod([k + 1 for k in spec.cutoffs]))
    if count > max_ops:
        raise BudgetError(f"{count} Kraus operators exceed the budget of {max_ops}")
    factors = [kraus_single(rm, spec.local_dims[m], km)
               for m, rm, km in zip(spec.accelerated, spec.r, spec.cutoffs)]
    return KrausSet(dims_in=spec.local_dims, dims_out=spec.dims_out, spec=spec,
                    factors=factors, order=spec.order)


def _apply_structured(ks: KrausSet, data: np.ndarray) -> np.ndarray:
    dims = list(ks.dims_in)
    for m, km, rm in zip(ks.spec.accelerated, ks.spec.cutoffs, ks.spec.r):
        d = dims[m]
        left = int(np.prod(dims[:m]))
        right = int(np.prod(dims[m + 1:]))
        coeffs = kraus_coefficients(rm, d, km)
        rho6 = np.ascontiguousarray(data.reshape(left, d, right, left, d, right))
        out = kernels.shift_channel(rho6, coeffs)
        dims[m] = d + km
        side = int(np.prod(dims))
        data = np.asarray(out).reshape(side, side)
    return data


def _apply_generic(ks: KrausSet, data: np.ndarray) -> np.ndarray:
    from .fock import permute_subsystems
    identity_order = ks.order == tuple(range(len(ks.order)))
    if not identity_order:
        data = permute_subsystems(data, ks.dims_in, ks.order)
    a = np.stack([op.data for op in ks.ops])
    t = a @ data
    out = np.tensordot(t, a.conj(), axes=([0, 2], [0, 2]))
    if not identity_order:
        internal_out = tuple(ks.dims_out[i] for i in ks.order)
        out = permute_subsystems(out, internal_out, np.argsort(ks.order))
    return out


def apply_to_matrix(ks: KrausSet, data: np.ndarray) -> np.ndarray:
    """Channel action on an arbitrary (not necessarily Hermitian) input matrix."""
    data = np.asarray(data, dtype=complex)
    side = int(np.prod(ks.dims_in))
    if data.shape != (side, side):
        raise DimensionError(f"input of shape {data.shape} does not match {ks.dims_in}")
    out_side = int(np.prod(ks.dims_out))
    if out_side > MAX_STATE_SIDE:
        raise BudgetError(f"output side {out_side} exceeds budget {MAX_STATE_SIDE}")
    if ks.structured:
        return _apply_structured(ks, data)
    return _apply_generic(ks, data)


def apply_channel(ks: KrausSet, rho: DensityMatrix) -> DensityMatrix:
    """``sum_k A_k rho A_k^dag`` with the exact truncation deficit recorded on the output."""
    if tuple(rho.dims) != ks.dims_in:
        raise DimensionError(f"state dims {rho.dims} do not match channel input {ks.dims_in}")
    out = apply_to_matrix(ks, rho.data)
    out = 0.5 * (out + out.conj().T)
    deficit = float(np.real(np.trace(rho.data) - np.sum(ks.completeness.T * rho.data)))
    return DensityMatrix(out, ks.dims_out, rho.trace_deficit + deficit,
                         meta={"channel_deficit": deficit})


def choi_matrix(ks: KrausSet, max_side: int = MAX_CHOI_SIDE) -> DensityMatrix:
    """``sum_ij |i><j| (x) E(|i><j|)`` on input (x) output."""
    din = int(np.prod(ks.dims_in))
    dout = int(np.prod(ks.dims_out))
    if din * dout > max_side:
        raise BudgetError(f"Choi side {din * dout} exceeds budget {max_side}")
    choi = np.zeros((din, dout, din, dout), dtype=complex)
    unit = np.zeros((din, din), dtype=complex)
    for i in range(din):
        for j in range(din):
            unit[i, j] = 1.0
            choi[i, :, j, :] = apply_to_matrix(ks, unit)
            unit[i, j] = 0.0
    choi = choi.reshape(din * dout, din * dout)
    return DensityMatrix(choi, ks.dims_in + ks.dims_out)


def _trace_norm(mat: np.ndarray) -> float:
    h = 0.5 * (mat + mat.conj().T)
    return float(np.abs(np.linalg.eigvalsh(h)).sum())


def verify_cptp(ks: KrausSet, samples: int = 100, seed: int = 0,
                tol: float = 1e-10) -> PropertyReport:
    """Numerical linearity, trace, positivity and complete-positivity checks.

    The trace check compares each sampled deficit with the certified tail
    bound of the originating spec (zero for a set without one).
    """
    from .report import merge

    rng = np.random.default_rng(seed)
    bound = ks.spec.tail_bound() if ks.spec is not None else 0.0
    lin = trace_v = pos = 0.0
    deficits = []
    for _ in range(samples):
        r1 = random_state(ks.dims_in, rng)
        r2 = random_state(ks.dims_in, rng)
        p = rng.random()
        e1 = apply_channel(ks, r1)
        e2 = apply_channel(ks, r2)
        mix = DensityMatrix(p * r1.data + (1 - p) * r2.data, ks.dims_in)
        emix = apply_channel(ks, mix)
        lin = max(lin, _trace_norm(emix.data - p * e1.data - (1 - p) * e2.data))
        for rho, out in ((r1, e1), (r2, e2)):
            deficit = 1.0 - out.trace()
            deficits.append(deficit)
            trace_v = max(trace_v, deficit - bound, -deficit)
            lo = np.linalg.eigvalsh(out.data).min()
            pos = max(pos, -lo)
    parts = [
        PropertyReport("cptp.linearity", samples, lin, tol, seed),
        PropertyReport("cptp.trace", 2 * samples, max(trace_v, 0.0), 1e-12, seed,
                       details={"tail_bound": bound, "max_deficit": max(deficits)}),
        PropertyReport("cptp.positivity", 2 * samples, max(pos, 0.0), TOL_PSD, seed),
    ]
    try:
        choi = choi_matrix(ks)
    except BudgetError as exc:
        parts.append(PropertyReport("cptp.complete_positivity", 0, 0.0, TOL_PSD, seed,
                                    assertable=False, notes=[f"skipped: {exc}"]))
    else:
        vals, _ = hermitian_eigensystem(choi)
        parts.append(PropertyReport("cptp.complete_positivity", 1, max(-vals[0], 0.0),
                                    TOL_PSD, seed, details={"choi_min_eig": float(vals[0])}))
    return merge("cptp", parts, seed)
