"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly, unless the
environment variable ``GEOCYCLE_DISABLE_NUMBA`` is set to a truthy value
("1", "true", "yes"). Both implementations stay importable as
``numpy_impl`` and ``jit_impl`` (the latter is ``None`` without numba).
"""
import logging
import os

from . import _numpy as numpy_impl

__all__ = [
    "BACKEND",
    "numpy_impl",
    "jit_impl",
    "harmonics",
    "arc_nodes",
    "cycle_moments",
    "objective",
    "legendre_terms",
    "fd_gradient",
]

_log = logging.getLogger(__name__)


def _numba_disabled():
    return os.environ.get("GEOCYCLE_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


try:
    logging.getLogger("numba").setLevel(logging.WARNING)
    from . import _jit as jit_impl
except ImportError:  # pragma: no cover - numba is a declared dependency
    jit_impl = None

if jit_impl is not None and not _numba_disabled():
    _impl = jit_impl
    BACKEND = "numba"
else:
    _impl = numpy_impl
    BACKEND = "numpy"
_log.debug("geocycle kernels backend: %s", BACKEND)

harmonics = _impl.harmonics
arc_nodes = _impl.arc_nodes
cycle_moments = _impl.cycle_moments
objective = _impl.objective
legendre_terms = _impl.legendre_terms
fd_gradient = _impl.fd_gradient
