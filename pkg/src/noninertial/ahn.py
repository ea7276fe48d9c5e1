"""An earlier Kraus family for the accelerated qubit pair, and why it is not trace preserving.

The operators are ``A_n = tanh(r)**n / cosh(r)**2 * cosh(r)**n_A / sqrt(n!) (x) (b_I^dag)**n``
on an (inertial, accelerated) qubit pair.  Each term is tagged with the
Rindler-II occupation ``n``; tracing that tag out sums the terms.  On the
Bell state |Phi+> the resulting trace is ``(sech^2 r + cosh^2 r) / 2``, which
exceeds 1 for every r > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSpec, apply_channel, kraus_multiparty
from .dilation import trace_environment
from .errors import BudgetError
from .fock import DensityMatrix
from .resource import pad_state
from .states import bell_phi_plus, bell_psi_plus

SERIES_TOL = 1e-12
MAX_AHN_CUTOFF = 1000
TP_TOL = 1e-9


def series_tail(r: float, K: int) -> float:
    """Remainder beyond n = K of ``sum_n (n+1) tanh^(2n) r / cosh^2 r`` (closed form)."""
    x = math.tanh(r) ** 2
    if x == 0.0:
        return 0.0
    return x ** (K + 1) * ((K + 2) - (K + 1) * x) / (1.0 - x)


def ahn_cutoff(r: float, tol: float = SERIES_TOL, max_cutoff: int = MAX_AHN_CUTOFF) -> int:
    """Smallest cutoff leaving a series remainder below ``tol``."""
    if r < 0:
        raise ValueError("r must be non-negative")
    for K in range(max_cutoff + 1):
        if series_tail(r, K) < tol:
            return K
    raise BudgetError(f"r = {r} needs an Ahn cutoff above {max_cutoff}")


@dataclass
class AhnKrausSet:
    """The operators ``A_0 .. A_cutoff`` as (2 * (2 + cutoff)) x 4 matrices."""

    r: float
    cutoff: int

    @property
    def dims_in(self) -> tuple[int, int]:
        return (2, 2)

    @property
    def dims_out(self) -> tuple[int, int]:
        return (2, 2 + self.cutoff)

    def op(self, n: int) -> np.ndarray:
        t, c = math.tanh(self.r), math.cosh(self.r)
        side = 2 + self.cutoff
        a = np.zeros((2 * side, 4))
        for alice in (0, 1):
            for lvl in (0, 1):
                # (b^dag)^n |lvl> / sqrt(n!) = sqrt(C(n+lvl, n)) |n+lvl>
                a[alice * side + n + lvl, 2 * alice + lvl] = (
                    t ** n * c ** (alice - 2) * math.sqrt(math.comb(n + lvl, n)))
        return a

    @property
    def ops(self) -> list[np.ndarray]:
        return [self.op(n) for n in range(self.cutoff + 1)]


def ahn_kraus(r: float, cutoff: int | None = None) -> AhnKrausSet:
    return AhnKrausSet(float(r), ahn_cutoff(r) if cutoff is None else int(cutoff))


def ahn_apply(r: float, cutoff: int | None = None, rho: DensityMatrix | None = None) -> DensityMatrix:
    """Image of ``rho`` (default |Phi+>) with the Rindler-II tag traced out.

    The Rindler-II occupation is kept as an explicit environment index of size
    ``2 + cutoff`` and traced out; the output lives on (2, 2 + cutoff).
    """
    ks = ahn_kraus(r, cutoff)
    rho = bell_phi_plus() if rho is None else rho
    side_env = 2 + ks.cutoff
    w = np.zeros((2 * (2 + ks.cutoff), side_env, 4))
    for n in range(ks.cutoff + 1):
        w[:, n, :] = ks.op(n)
    out = trace_environment(w, rho.data)
    return DensityMatrix(out, ks.dims_out,
                         meta={"r": ks.r, "cutoff": ks.cutoff,
                               "series_tail": series_tail(ks.r, ks.cutoff)})


def ahn_trace_formula(r: float) -> float:
    """``(1 / cosh^2 r + cosh^2 r) / 2``."""
    if r < 0:
        raise ValueError("r must be non-negative")
    c2 = math.cosh(r) ** 2
    return 0.5 * (1.0 / c2 + c2)


def _compare_with_channel(r: float, rho: DensityMatrix, epsilon: float):
    ahn_out = ahn_apply(r, rho=rho)
    spec = ChannelSpec.build((2, 2), (1,), r, epsilon)
    ch_out = apply_channel(kraus_multiparty(spec), rho)
    side = max(ahn_out.dims[1], ch_out.dims[1])
    a = pad_state(ahn_out.data, ahn_out.dims, (2, side))
    b = pad_state(ch_out.data, ch_out.dims, (2, side))
    diff = a - b
    dist = 0.5 * float(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))).sum())
    return ahn_out, ch_out, spec, dist


def side_by_side_report(r_grid, epsilon: float = 1e-10) -> list[dict]:
    """Per r: the Ahn trace on |Phi+> against the closed form and the trace-preserving channel.

    An extra row per r records the same comparison on (|01> + |10>)/sqrt(2).
    """
    rows = []
    for r in r_grid:
        r = float(r)
        for name, rho in (("bell-phi-plus", bell_phi_plus()), ("bell-psi-plus", bell_psi_plus())):
            ahn_out, ch_out, spec, dist = _compare_with_channel(r, rho, epsilon)
            ahn_trace = ahn_out.trace()
            deviation = abs(ahn_trace - 1.0)
            rows.append({
                "state": name,
                "r": r,
                "ahn_cutoff": ahn_out.meta["cutoff"],
                "ahn_trace": ahn_trace,
                "formula": ahn_trace_formula(r) if name == "bell-phi-plus" else float("nan"),
                "ahn_deviation": deviation,
                "channel_cutoff": spec.cutoffs[0],
                "channel_deficit": ch_out.trace_deficit,
                "channel_tail_bound": spec.tail_bound(),
                "trace_distance": dist,
                "verdict": "not trace preserving" if deviation > TP_TOL else "trace preserving",
            })
    return rows
