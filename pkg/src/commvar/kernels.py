"""Backend selection for the hot kernels.

The compiled extension ``commvar._kernels`` is used when importable; setting
``COMMVAR_PURE=1`` forces the pure-Python fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("COMMVAR_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

rank_mod_p = _impl.rank_mod_p
count_zeros = _impl.count_zeros


def backends():
    """Map backend name -> kernel module for every backend available here."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels as compiled
        found["cython"] = compiled
    except ImportError:
        pass
    return found
