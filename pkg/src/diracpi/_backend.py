"""Select the compiled kernels when available, else the numpy fallback.

Set ``DIRACPI_BACKEND=python`` to force the fallback.
"""

import os

from . import _core_py

BACKEND = "python"
exp_kernel_apply = _core_py.exp_kernel_apply
hs_sum = _core_py.hs_sum

if os.environ.get("DIRACPI_BACKEND", "").lower() != "python":
    try:
        from . import _core
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        exp_kernel_apply = _core.exp_kernel_apply
        hs_sum = _core.hs_sum
