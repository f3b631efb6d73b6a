"""Import-time selection of the simulation kernel backend.

The compiled extension is preferred when present; setting the environment
variable ``SBLS_PURE_PYTHON=1`` forces the pure-Python kernels (useful for
debugging and for benchmarking one backend against the other).
"""

import os

from . import _kernels_py

if os.environ.get("SBLS_PURE_PYTHON", "") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

nonlinear_trajectory = _impl.nonlinear_trajectory
cstr_rk4 = _impl.cstr_rk4


def backend_name() -> str:
    """Name of the simulation backend selected at import ('cython' or 'python')."""
    return BACKEND
