"""Noninertial (Unruh) dynamics as a quantum channel on truncated Fock spaces."""
from .channel import (AccelerationParam, ChannelSpec, KrausSet, apply_channel, choi_matrix,
                      choose_cutoff, kraus_coefficients, kraus_multiparty, r_from_omega,
                      truncation_tail, verify_cptp)
from .dilation import dilate_and_trace, oracle_compare
from .fock import DensityMatrix, FockOperator, partial_trace
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "AccelerationParam", "BACKEND", "ChannelSpec", "DensityMatrix", "FockOperator", "KrausSet",
    "apply_channel", "choi_matrix", "choose_cutoff", "dilate_and_trace", "kraus_coefficients",
    "kraus_multiparty", "oracle_compare", "partial_trace", "r_from_omega", "truncation_tail",
    "verify_cptp",
]
