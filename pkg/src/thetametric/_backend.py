"""Select the compiled kernels when available, else the pure-Python ones.

Set ``THETAMETRIC_BACKEND=python`` to force the fallback.
"""
import os

if os.environ.get("THETAMETRIC_BACKEND", "").lower() == "python":
    from . import _pykernels as kernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as kernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
