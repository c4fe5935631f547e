"""Hot loops, with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time. Set ``KT_USE_NUMBA=0`` to force
the numpy path (useful for debugging, or where numba is unavailable).
Both backends expose the same functions with the same signatures:

``sweep(A, b, x, order, norms)``
    Successive row projections of ``x`` onto ``<a_i, x> = b_i`` for each
    ``i`` in ``order``. Returns a new array.
``forward_elimination(H)``
    The compatible matrix ``C`` of the forward Kaczmarz sweep, built by the
    triple loop that left-multiplies the elimination factors.
``backward_elimination(H)``
    The compatible matrix ``Chat`` of the reverse half-sweep ``m-1 .. 2``.
``trace_rays(grid, thetas, offsets)``
    Dense pixel/ray intersection lengths, one row per ``(theta, offset)``.
"""

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a hard dependency
    numba_backend = None


def _wants_numba():
    flag = os.environ.get("KT_USE_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off", "")


if numba_backend is not None and _wants_numba():
    backend = numba_backend
    BACKEND = "numba"
else:
    backend = numpy_backend
    BACKEND = "numpy"

sweep = backend.sweep
forward_elimination = backend.forward_elimination
backward_elimination = backend.backward_elimination
trace_rays = backend.trace_rays

__all__ = [
    "BACKEND",
    "backend",
    "numpy_backend",
    "numba_backend",
    "sweep",
    "forward_elimination",
    "backward_elimination",
    "trace_rays",
]
