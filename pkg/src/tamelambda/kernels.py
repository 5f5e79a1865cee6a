"""Backend selection for the finite-field kernels.

The compiled extension is used when importable; set ``TAMELAMBDA_PURE=1``
to force the pure-Python fallback.  Moduli with ell >= 2**31 always take
the fallback path.
"""

import os

from . import _kernels_py

_compiled = None
if os.environ.get("TAMELAMBDA_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_LIMIT = 2**31


def mulmod(a, b, mod, ell):
    if _compiled is not None and ell < _LIMIT:
        return _compiled.mulmod(a, b, mod, ell)
    return _kernels_py.mulmod(a, b, mod, ell)


def powmod(a, e, mod, ell):
    if _compiled is not None and ell < _LIMIT:
        return _compiled.powmod(a, e, mod, ell)
    return _kernels_py.powmod(a, e, mod, ell)
