"""Select the compiled kernels when available, the numpy fallback otherwise.

Set ``NONINERTIAL_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
shift_channel = _kernels_py.shift_channel

if os.environ.get("NONINERTIAL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        shift_channel = _compiled.shift_channel
        BACKEND = "compiled"
