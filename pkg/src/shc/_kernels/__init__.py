"""Hot-kernel backend selection.

The compiled extension (`shc._kernels._core`, built from Cython) is
used when importable; otherwise the numpy fallback takes over.  Set
``SHC_FORCE_FALLBACK=1`` to force the pure-Python path.  Both backends
consume identical counter-addressed randomness, so the choice affects
speed, not results (up to libm rounding).
"""

from __future__ import annotations

import os

import numpy as np

from . import fallback as _fallback
from . import laws

_impl = _fallback
_BACKEND = "fallback"

if os.environ.get("SHC_FORCE_FALLBACK", "") != "1":
    try:
        from . import _core as _compiled

        _impl = _compiled
        _BACKEND = "compiled"
    except ImportError:
        pass


def backend_name() -> str:
    return _BACKEND


def running_sup(law, params, seed, stream, path_lo, n_paths, n_steps, dt,
                antithetic=False):
    return _impl.running_sup(
        int(law), np.ascontiguousarray(params, dtype=float), seed, stream,
        path_lo, n_paths, n_steps, dt, antithetic,
    )


def disk_exit(law, params, seed, stream, path_lo, n_paths, n_steps, dt, x0,
              center, radius, outside=False, bridge=False, antithetic=False):
    params = np.ascontiguousarray(params, dtype=float)
    if _impl is _fallback:
        return _fallback.disk_exit(
            int(law), params, seed, stream, path_lo, n_paths, n_steps, dt,
            x0, center, radius, outside, bridge, antithetic,
        )
    cx, cy = float(center[0]), float(center[1])
    return _impl.disk_exit(
        int(law), params, seed, stream, path_lo, n_paths, n_steps, dt,
        x0, cx, cy, float(radius), outside, bridge, antithetic,
    )


def interval_exit(law, params, seed, stream, path_lo, n_paths, n_steps, dt,
                  halfwidth, antithetic=False):
    return _impl.interval_exit(
        int(law), np.ascontiguousarray(params, dtype=float), seed, stream,
        path_lo, n_paths, n_steps, dt, float(halfwidth), antithetic,
    )
