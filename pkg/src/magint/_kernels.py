"""Select the compiled jet kernels when available, else the numpy fallback.

Set ``MAGINT_PURE_PYTHON=1`` to force the fallback.
"""

import os

BACKEND = "python"

if not os.environ.get("MAGINT_PURE_PYTHON"):
    try:
        from ._jetcore import horner1, horner2, mul1, mul2  # noqa: F401

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

if BACKEND == "python":
    from ._jetcore_py import horner1, horner2, mul1, mul2  # noqa: F401

__all__ = ["BACKEND", "mul1", "mul2", "horner1", "horner2"]
