"""Import-time choice between the compiled and pure-Python determinant kernels.

Set ``ANNULUS_KIT_PURE_PYTHON=1`` to force the Python kernel.  The compiled
kernel works in int64 and any overflow transparently reruns the computation in
the Python kernel, so results never depend on which backend is active.
"""

from __future__ import annotations

import os

from . import _bareiss_py
from ._bareiss_py import dense_exact_div

__all__ = ["BACKEND", "bareiss_det", "dense_exact_div", "python_bareiss_det", "compiled_bareiss_det"]

python_bareiss_det = _bareiss_py.bareiss_det
compiled_bareiss_det = None

if not os.environ.get("ANNULUS_KIT_PURE_PYTHON"):
    try:
        from ._bareiss import bareiss_det as compiled_bareiss_det  # type: ignore[no-redef]
    except ImportError:
        compiled_bareiss_det = None

BACKEND = "compiled" if compiled_bareiss_det is not None else "python"


def bareiss_det(rows):
    if compiled_bareiss_det is not None:
        try:
            return compiled_bareiss_det(rows)
        except OverflowError:
            pass
    return python_bareiss_det(rows)
