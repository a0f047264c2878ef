"""Float kernel dispatch: compiled extension when built, pure Python otherwise.

Set ``DEBTNET_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
greatest_vector_float = _kernels_py.greatest_vector
phi_vector_float = _kernels_py.phi_vector

if not os.environ.get("DEBTNET_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        BACKEND = "compiled"
        greatest_vector_float = _compiled.greatest_vector
        phi_vector_float = _compiled.phi_vector
