"""Selects the compiled fusion kernels when built, else the numpy fallback.

Set ``KATCHECK_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("KATCHECK_PURE_PYTHON"):
    from katcheck._kernels_py import fuse_or

    BACKEND = "python"
else:
    try:
        from katcheck._kernels import fuse_or

        BACKEND = "cython"
    except ImportError:
        from katcheck._kernels_py import fuse_or

        BACKEND = "python"

__all__ = ["BACKEND", "fuse_or"]
