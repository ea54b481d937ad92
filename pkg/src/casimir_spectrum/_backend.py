"""Pick the compiled contour kernels when importable, else the NumPy fallback.

Set ``CASIMIR_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("CASIMIR_PURE_PYTHON", "") not in ("", "0"):
    from . import _fallback as impl

    NAME = "python"
else:
    try:
        from . import _kernels as impl

        NAME = "compiled"
    except ImportError:  # extension not built
        from . import _fallback as impl

        NAME = "python"

c1_integral = impl.c1_integral
c2_integral = impl.c2_integral
