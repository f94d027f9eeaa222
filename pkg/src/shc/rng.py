"""Counter-based random streams built on Philox4x64-10.

Every Monte Carlo sampler in this package draws from keyed Philox
streams instead of a stateful generator.  The key encodes
``(seed, stream tag, path index)`` and the counter encodes
``(step, block, draw)``, so

* any single path can be regenerated in isolation,
* chunking or parallel partitioning never changes the numbers, and
* the compiled kernels and the pure numpy fallback consume bitwise
  identical randomness.

The compiled extension re-implements the same block function in C; the
reference test suite checks both against ``numpy.random.Philox``.
"""

from __future__ import annotations

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = 0x9E3779B97F4A7C15
_W1 = 0xBB67AE8584CAA73B
_MASK32 = np.uint64(0xFFFFFFFF)
_MASK64 = (1 << 64) - 1
_INV53 = 1.0 / 9007199254740992.0  # 2^-53

# Path index occupies the low bits of the second key word; the stream
# tag sits above it.  2^40 paths per stream is far beyond any budget.
PATH_BITS = 40

# Stream tags.  Estimators compose them with `substream` so distinct
# (operation, grid point) pairs never share randomness.
STREAM_SUP = 1
STREAM_DEFICIT = 2
STREAM_EXIT = 3
STREAM_PERIMETER = 4
STREAM_GEOMETRY = 5
STREAM_HALFSPACE = 6
STREAM_INTERVAL = 7
STREAM_CALIBRATION = 8
STREAM_SELFTEST = 9

# Counter lane c1 at or above this marks variable-length draws (jump
# counts, rejection loops); fixed per-step slots live below it.
JUMP_BLOCK_BASE = 64


def substream(tag: int, index: int) -> int:
    """Derive a distinct stream id from a tag and a small index."""
    if not 0 <= index < 1 << 10:
        raise ValueError("substream index out of range")
    return (tag << 10) | index


def _key_words(seed: int, stream: int) -> tuple[np.uint64, int]:
    k0 = np.uint64(seed & _MASK64)
    if not 0 <= stream < 1 << (64 - PATH_BITS):
        raise ValueError("stream tag out of range")
    return k0, stream << PATH_BITS


def _mulhilo(a: np.uint64, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a_lo = a & _MASK32
    a_hi = a >> np.uint64(32)
    b_lo = b & _MASK32
    b_hi = b >> np.uint64(32)
    lo = a * b
    t = a_hi * b_lo + ((a_lo * b_lo) >> np.uint64(32))
    carry = (t & _MASK32) + a_lo * b_hi
    hi = a_hi * b_hi + (t >> np.uint64(32)) + (carry >> np.uint64(32))
    return hi, lo


def philox4x64(c0, c1, c2, c3, k0, k1):
    """One Philox4x64-10 block; arguments broadcast, outputs are uint64."""
    c0 = np.asarray(c0, dtype=np.uint64)
    c1 = np.asarray(c1, dtype=np.uint64)
    c2 = np.asarray(c2, dtype=np.uint64)
    c3 = np.asarray(c3, dtype=np.uint64)
    k0 = int(k0)
    k1 = np.asarray(k1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for _ in range(10):
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0 = hi1 ^ c1 ^ np.uint64(k0)
            c1 = lo1
            c2 = hi0 ^ c3 ^ k1
            c3 = lo0
            k0 = (k0 + _W0) & _MASK64
            k1 = k1 + np.uint64(_W1)
    return c0, c1, c2, c3


def to_uniform(x: np.ndarray) -> np.ndarray:
    """Map uint64 words to doubles in [0, 1)."""
    return (x >> np.uint64(11)).astype(np.float64) * _INV53


def cell_uniforms(seed, stream, path_lo, n_paths, steps, block, draw=0):
    """Four (n_paths, n_steps) uniform arrays for one cell block.

    `steps` is an integer array of step indices; `block` selects the
    fixed slot group within each (path, step) cell and `draw` indexes
    variable-length sub-draws.
    """
    k0, k1_base = _key_words(seed, stream)
    paths = np.arange(path_lo, path_lo + n_paths, dtype=np.uint64)
    steps = np.asarray(steps, dtype=np.uint64)
    shape = (n_paths, steps.shape[0])
    k1 = np.broadcast_to((paths + np.uint64(k1_base))[:, None], shape)
    c0 = np.broadcast_to(steps[None, :], shape)
    zero = np.zeros(shape, dtype=np.uint64)
    out = philox4x64(c0, zero + np.uint64(block), zero + np.uint64(draw), zero, k0, k1)
    return tuple(to_uniform(w) for w in out)


def box_muller(u0: np.ndarray, u1: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two standard normals per uniform pair (u0 may be 0, never 1)."""
    r = np.sqrt(-2.0 * np.log1p(-u0))
    a = 2.0 * np.pi * u1
    return r * np.cos(a), r * np.sin(a)


def geometry_rng(seed: int, stream: int) -> np.random.Generator:
    """Stateful generator for non-path sampling (layer points, etc.)."""
    return np.random.default_rng(np.random.SeedSequence([seed & _MASK64, stream]))
