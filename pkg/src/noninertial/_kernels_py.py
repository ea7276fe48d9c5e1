"""Pure-Python (numpy) versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def shift_channel(rho6, coeffs):
    """Apply a Fock-shift channel along the middle axis of a 6-index state.

    ``rho6`` has shape ``(L, d, R, L, d, R)``; ``coeffs[k, n]`` is the amplitude
    sending level ``n`` to ``n + k``.  Returns shape ``(L, d+K, R, L, d+K, R)``.
    """
    L, d, R = rho6.shape[:3]
    nk = coeffs.shape[0]
    out = np.zeros((L, d + nk - 1, R, L, d + nk - 1, R), dtype=complex)
    for k in range(nk):
        w = np.outer(coeffs[k], coeffs[k])
        out[:, k:k + d, :, :, k:k + d, :] += rho6 * w[None, :, None, None, :, None]
    return out
