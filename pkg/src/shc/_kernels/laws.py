"""Law codes and slot layout shared by the compiled and numpy kernels.

A "law" is an increment distribution the hot kernels know how to sample
in closed form.  Each (path, step) cell owns Philox blocks addressed by
``(step, block, draw)``; the fixed slot layout below is mirrored
verbatim in the C implementation, so both backends consume identical
randomness:

    block 0, all laws:
      GAUSS1D   u0,u1 -> Box-Muller z (second normal unused)
      STABLE1D  u0 -> U = pi*(u0-1/2); u1 -> E = -log(1-u1)   (CMS)
      JD1D      u0,u1 -> z;  u2 -> U;  u3 -> E
      GAUSS2D   u0,u1 -> z1,z2;  u2 -> bridge s=1;  u3 -> bridge s=2
      STABLE2D  u0 -> U = pi*u0 (Kanter); u1 -> E; u2,u3 -> w1,w2
      JD2D      u0,u1 -> z1,z2;  u2 -> bridge s=1;  u3 -> bridge s=2
    block 1 (JD2D): u0 -> U; u1 -> E; u2,u3 -> w1,w2
    block 2 (GAUSS2D/JD2D): u0 -> bridge s=4

Parameter vectors:
    GAUSS1D  [sigma]
    STABLE1D [beta, scale]
    JD1D     [sigma, beta, scale]
    GAUSS2D  [l11, l21, l22]            (Cholesky factor of A)
    STABLE2D [beta, scale]
    JD2D     [l11, l21, l22, beta, scale]

Stable laws are normalized so the increment over dt has characteristic
function exp(-dt * scale**beta * |xi|**beta); `scale=1` is the standard
isotropic stable.
"""

from __future__ import annotations

import numpy as np

from .. import rng

GAUSS1D = 1
STABLE1D = 2
JD1D = 3
GAUSS2D = 4
STABLE2D = 5
JD2D = 6

ONE_DIM = (GAUSS1D, STABLE1D, JD1D)
TWO_DIM = (GAUSS2D, STABLE2D, JD2D)
DIFFUSIVE = (GAUSS1D, JD1D, GAUSS2D, JD2D)

BLOCK_MAIN = 0
BLOCK_SECOND = 1
BLOCK_BRIDGE4 = 2

_TINY = 2.0 ** -54


def cms_symmetric(beta: float, u0: np.ndarray, u1: np.ndarray) -> np.ndarray:
    """Standard symmetric beta-stable variate (Chambers-Mallows-Stuck).

    Normalized to characteristic function exp(-|xi|**beta); beta=1 is
    the standard Cauchy tan(U).
    """
    U = np.pi * (np.maximum(u0, _TINY) - 0.5)
    E = -np.log1p(-u1)
    b = beta
    if b == 1.0:
        return np.sin(U) / np.cos(U)
    out = (np.sin(b * U) / np.cos(U) ** (1.0 / b)) * (
        np.cos((1.0 - b) * U) / E
    ) ** ((1.0 - b) / b)
    return out


def kanter_subordinator(alpha: float, u0: np.ndarray, u1: np.ndarray) -> np.ndarray:
    """One-sided alpha-stable variate with Laplace transform exp(-lam**alpha)."""
    U = np.pi * np.maximum(u0, _TINY)
    E = np.maximum(-np.log1p(-u1), 1e-300)
    if alpha == 0.5:
        return 1.0 / (2.0 * (1.0 + np.cos(U)) * E)
    num = np.sin(alpha * U) ** alpha * np.sin((1.0 - alpha) * U) ** (1.0 - alpha)
    a = (num / np.sin(U)) ** (1.0 / (1.0 - alpha))
    return (a / E) ** ((1.0 - alpha) / alpha)


def trace_from_params(law: int, params: np.ndarray) -> float:
    """tr(A) recovered from the packed Cholesky factors (2-d laws)."""
    if law == GAUSS2D or law == JD2D:
        l11, l21, l22 = params[0], params[1], params[2]
        return float(l11 * l11 + l21 * l21 + l22 * l22)
    raise ValueError("trace only defined for diffusive 2-d laws")


def increments(law, params, seed, stream, path_lo, n_paths, steps, dt):
    """Closed-form increments for the given step indices.

    Returns an (n_paths, n_steps) array for 1-d laws or a pair of such
    arrays for 2-d laws.
    """
    p = np.asarray(params, dtype=float)
    u = rng.cell_uniforms(seed, stream, path_lo, n_paths, steps, BLOCK_MAIN)
    if law == GAUSS1D:
        z, _ = rng.box_muller(u[0], u[1])
        return p[0] * np.sqrt(dt) * z
    if law == STABLE1D:
        s = cms_symmetric(p[0], u[0], u[1])
        return p[1] * dt ** (1.0 / p[0]) * s
    if law == JD1D:
        z, _ = rng.box_muller(u[0], u[1])
        s = cms_symmetric(p[1], u[2], u[3])
        return p[0] * np.sqrt(dt) * z + p[2] * dt ** (1.0 / p[1]) * s
    if law == GAUSS2D:
        z1, z2 = rng.box_muller(u[0], u[1])
        sq = np.sqrt(dt)
        return p[0] * sq * z1, p[1] * sq * z1 + p[2] * sq * z2
    if law == STABLE2D:
        sub = kanter_subordinator(p[0] / 2.0, u[0], u[1])
        w1, w2 = rng.box_muller(u[2], u[3])
        fac = p[1] * dt ** (1.0 / p[0]) * np.sqrt(2.0 * sub)
        return fac * w1, fac * w2
    if law == JD2D:
        z1, z2 = rng.box_muller(u[0], u[1])
        sq = np.sqrt(dt)
        gx = p[0] * sq * z1
        gy = p[1] * sq * z1 + p[2] * sq * z2
        u2 = rng.cell_uniforms(seed, stream, path_lo, n_paths, steps, BLOCK_SECOND)
        sub = kanter_subordinator(p[3] / 2.0, u2[0], u2[1])
        w1, w2 = rng.box_muller(u2[2], u2[3])
        fac = p[4] * dt ** (1.0 / p[3]) * np.sqrt(2.0 * sub)
        return gx + fac * w1, gy + fac * w2
    raise ValueError(f"unknown law code {law}")


def bridge_uniforms(law, seed, stream, path_lo, n_paths, steps, stride):
    """Uniforms for diffusion-bridge exit flags at the given stride."""
    if stride == 1:
        block, slot = BLOCK_MAIN, 2
    elif stride == 2:
        block, slot = BLOCK_MAIN, 3
    elif stride == 4:
        block, slot = BLOCK_BRIDGE4, 0
    else:
        raise ValueError("bridge stride must be 1, 2 or 4")
    u = rng.cell_uniforms(seed, stream, path_lo, n_paths, steps, block)
    return u[slot]
