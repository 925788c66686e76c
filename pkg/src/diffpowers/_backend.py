"""Select the compiled kernels when available, else the pure-Python ones.

Set ``DIFFPOWERS_PURE=1`` to force the pure-Python path.
"""

import os

from ._kernels_py import BudgetExceeded

if os.environ.get("DIFFPOWERS_PURE", "") not in ("", "0"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = "python" if kernels.__name__.endswith("_kernels_py") else "cython"

mul_terms = kernels.mul_terms
reduce_terms = kernels.reduce_terms
hnf_rows = kernels.hnf_rows

__all__ = ["BACKEND", "BudgetExceeded", "hnf_rows", "mul_terms", "reduce_terms"]
