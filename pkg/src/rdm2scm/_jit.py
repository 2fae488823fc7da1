"""JIT switch.

Hot kernels are compiled with numba unless ``RDM2SCM_DISABLE_NUMBA=1`` is set
in the environment (or numba cannot be imported), in which case the very same
functions run as plain Python/numpy.
"""
import os

_disabled = os.environ.get("RDM2SCM_DISABLE_NUMBA", "0").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    numba = None
    HAS_NUMBA = False


def njit(fn=None, **kwargs):
    """``numba.njit`` when enabled, identity otherwise."""
    opts = {"cache": True, "nogil": True}
    opts.update(kwargs)

    def wrap(f):
        if HAS_NUMBA:
            return numba.njit(**opts)(f)
        return f

    if fn is None:
        return wrap
    return wrap(fn)


def backend_name():
    return "numba" if HAS_NUMBA else "numpy"
