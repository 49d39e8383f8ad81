"""Backend selection for the hot numeric kernels.

Every hot kernel in this package exists twice: a numba ``@njit`` loop
version and a vectorized pure-numpy version.  The active path is chosen
once at import time:

* default: numba, if importable
* ``EVOPOOL_NO_NUMBA=1`` (or numba missing): pure numpy

``benchmarks/bench_backends.py`` times the two paths against each other.
"""

import os

_DISABLE = os.environ.get("EVOPOOL_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

if not _DISABLE:
    try:
        import numba  # noqa: F401
        NUMBA_AVAILABLE = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but be graceful
        NUMBA_AVAILABLE = False
else:
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
