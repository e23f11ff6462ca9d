"""Pick the scalar multiplication kernel at import time.

The compiled GMP kernel is used when it was built; ``RDE_PURE_PYTHON=1``
forces the pure-Python fallback.
"""

import os

from . import _ecpy

if os.environ.get("RDE_PURE_PYTHON"):
    kernel = _ecpy
else:
    try:
        from . import _ecfast as kernel
    except ImportError:
        kernel = _ecpy

NAME = kernel.NAME
mul = kernel.mul
