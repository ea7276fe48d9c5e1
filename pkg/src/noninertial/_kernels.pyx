# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; ``_kernels_py`` holds the reference numpy versions."""
import numpy as np

from cython.parallel import prange


def shift_channel(const double complex[:, :, :, :, :, :] rho6,
                  const double[:, :] coeffs):
    """Apply a Fock-shift channel along the middle axis of a 6-index state.

    ``rho6`` has shape ``(L, d, R, L, d, R)``; ``coeffs[k, n]`` is the amplitude
    sending level ``n`` to ``n + k``.  Returns shape ``(L, d+K, R, L, d+K, R)``.
    """
    cdef Py_ssize_t L = rho6.shape[0], d = rho6.shape[1], R = rho6.shape[2]
    cdef Py_ssize_t nk = coeffs.shape[0], dout = d + nk - 1
    cdef Py_ssize_t a, n, b, a2, m, b2, k
    cdef double w
    out_arr = np.zeros((L, dout, R, L, dout, R), dtype=np.complex128)
    cdef double complex[:, :, :, :, :, :] out = out_arr
    # parallel over the first row index: each thread owns disjoint output rows
    for a in prange(L, nogil=True, schedule="static"):
        for n in range(d):
            for k in range(nk):
                for b in range(R):
                    for a2 in range(L):
                        for m in range(d):
                            w = coeffs[k, n] * coeffs[k, m]
                            if w == 0.0:
                                continue
                            for b2 in range(R):
                                out[a, n + k, b, a2, m + k, b2] = (
                                    out[a, n + k, b, a2, m + k, b2]
                                    + w * rho6[a, n, b, a2, m, b2])
    return out_arr
