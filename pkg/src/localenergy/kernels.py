"""Select the compiled kernels when available, else the numpy fallback.

Set ``LOCALENERGY_PURE=1`` to force the fallback.
"""
import os

from . import _pycore

if os.environ.get("LOCALENERGY_PURE") == "1":
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _pycore
        BACKEND = "python"

arch_pair_sum = _impl.arch_pair_sum
arch_row_sums = _impl.arch_row_sums

__all__ = ["BACKEND", "arch_pair_sum", "arch_row_sums"]
