"""Backend selection for the partition-search kernels.

Numba is used when importable unless ``HYBRIDBF_DISABLE_NUMBA`` is set to a
true value (``1``, ``true``, ``yes``), in which case the pure-numpy
implementations run instead.  Both backends stay importable as
``numpy_backend`` and ``numba_backend`` (``None`` without numba) so tests and
benchmarks can compare them directly.
"""
import os

from . import _numpy as numpy_backend
from ._numpy import restricted_growth_strings

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is an optional extra
    numba_backend = None

ENV_FLAG = "HYBRIDBF_DISABLE_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(ENV_FLAG, "").strip().lower() in ("1", "true", "yes", "on")


def active_backend():
    if numba_backend is None or numba_disabled():
        return numpy_backend
    return numba_backend


def backend_name() -> str:
    return "numba" if active_backend() is numba_backend else "numpy"


__all__ = [
    "numpy_backend",
    "numba_backend",
    "active_backend",
    "backend_name",
    "numba_disabled",
    "restricted_growth_strings",
    "ENV_FLAG",
]
