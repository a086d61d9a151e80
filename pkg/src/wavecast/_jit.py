"""Optional numba acceleration.

Hot kernels are decorated with :func:`njit`. When numba is missing, or when
``WAVECAST_DISABLE_JIT`` is set to a truthy value before import, the
decorator is the identity and the kernels run as plain Python over numpy
arrays. Both paths execute the same source.
"""

from __future__ import annotations

import os

_FLAG = os.environ.get("WAVECAST_DISABLE_JIT", "").strip().lower()
_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    import numba as _numba
except ImportError:  # pragma: no cover - exercised through the env flag
    _numba = None

JIT_ENABLED = _numba is not None


def njit(*args, **kwargs):
    if _numba is None:
        if args and callable(args[0]) and len(args) == 1 and not kwargs:
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return _numba.njit(*args, **kwargs)
