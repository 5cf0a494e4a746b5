"""Backend selection for the gate kernels.

The compiled extension is used when it was built; otherwise the numpy
implementation is loaded.  Setting ``QHTT_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("QHTT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

apply_1q = _impl.apply_1q
apply_2q = _impl.apply_2q
