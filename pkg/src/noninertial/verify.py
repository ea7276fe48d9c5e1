"""The full property bundle behind ``noninertial verify``."""
from __future__ import annotations

import numpy as np

from .channel import ChannelSpec, kraus_multiparty, verify_cptp
from .dilation import oracle_compare
from .report import PropertyReport
from .resource import (FreeStatePredicate, composition_check, contraction_check,
                       convex_mixture_check, dilation_freeness_check, geometry_check,
                       monotonicity_check, nrng_check, tensor_composition_check)
from .states import random_state

ORACLE_TOL = 1e-8


def oracle_report(spec: ChannelSpec, samples: int, seed: int, method: str = "closed") -> PropertyReport:
    """Worst trace distance between the Kraus channel and isometry-then-trace."""
    rng = np.random.default_rng(seed)
    worst = max(oracle_compare(random_state(spec.local_dims, rng), spec, method)
                for _ in range(samples))
    return PropertyReport(f"oracle[{method}]", samples, worst, ORACLE_TOL, seed,
                          details={"r": list(spec.r), "cutoffs": list(spec.cutoffs)})


def run_verify(r: float = 0.881374, samples: int = 50, seed: int = 0,
               epsilon: float = 1e-10, inject_fault: int | None = None) -> list[PropertyReport]:
    """Every suite on the default qubit configuration (two qubits, the second accelerated).

    ``inject_fault`` drops that Kraus operator from the set handed to the CPTP and
    NRNG suites, which must then report a named failure.
    """
    spec = ChannelSpec.build((2, 2), (1,), r, epsilon)
    ks = kraus_multiparty(spec)
    if inject_fault is not None:
        ks = ks.without(inject_fault)
    inc = FreeStatePredicate("incoherent")
    ppt = FreeStatePredicate("ppt-separable", (1,))
    qubit = ChannelSpec.build((2,), (0,), r, epsilon)
    reports = [
        verify_cptp(ks, samples, seed),
        oracle_report(spec, min(samples, 20), seed),
        nrng_check(spec, inc, samples, seed, ks=ks),
        nrng_check(spec, ppt, samples, seed, ks=ks),
        dilation_freeness_check(spec, inc, samples, seed),
        geometry_check(spec, inc, samples, seed),
        composition_check(spec, "diagonal-unitary", "both", inc, samples, seed),
        composition_check(spec, "local-free-op", "both", ppt, samples, seed),
        convex_mixture_check(spec, "permutation", 0.5, inc, samples, seed),
        tensor_composition_check("full-dephasing", (2,), qubit, inc, samples, seed),
        monotonicity_check(spec, "l1_coherence", "diagonal-unitary", samples, seed),
        monotonicity_check(spec, "relative_entropy_coherence", "permutation", samples, seed),
        monotonicity_check(spec, "negativity", "local-free-op", samples, seed),
        monotonicity_check(qubit, "robustness_coherence_qubit", None, min(samples, 20), seed),
    ]
    for distance in ("trace", "bures", "relative-entropy", "hilbert-schmidt"):
        reports.append(contraction_check(spec, distance, samples, seed))
    return reports
