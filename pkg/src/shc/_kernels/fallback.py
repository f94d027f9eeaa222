"""Pure numpy implementations of the hot path kernels.

These are the reference semantics for the compiled extension: same
Philox slot layout, same monitoring rules, same outputs.  The cores are
generator-parameterized so the generic (density-sampled) models in
`shc.models` can reuse them with their own increment generators.

Monitoring convention: a path of n steps is observed at the fine grid
indices 1..n; stride ``s`` observes only indices divisible by ``s``.
Exit steps are reported as fine indices (or -1), running suprema are
clipped at zero.
"""

from __future__ import annotations

import numpy as np

from . import laws

# Step-chunk length; a multiple of 4 so chunk boundaries are monitored
# by every stride and only one carried state is needed.
CHUNK_STEPS = 128

STRIDES = (1, 2, 4)

# Bridge exit probabilities below exp(-40) are treated as zero so the
# kernels can skip the uniform draw; both backends apply the same cap.
BRIDGE_ARG_CAP = 40.0


def _expand(inc: np.ndarray, antithetic: bool) -> np.ndarray:
    if not antithetic:
        return inc
    out = np.empty((2 * inc.shape[0],) + inc.shape[1:], dtype=inc.dtype)
    out[0::2] = inc
    out[1::2] = -inc
    return out


def running_sup_core(gen, n_paths, n_steps, antithetic):
    """Per-path running supremum at strides 1/2/4; shape (n_out, 3)."""
    n_out = 2 * n_paths if antithetic else n_paths
    cum = np.zeros(n_out)
    sup = np.zeros((n_out, 3))
    for s0 in range(0, n_steps, CHUNK_STEPS):
        s1 = min(n_steps, s0 + CHUNK_STEPS)
        inc = _expand(gen(s0, s1), antithetic)
        pos = np.cumsum(inc, axis=1)
        pos += cum[:, None]
        idx = np.arange(s0 + 1, s1 + 1)
        sup[:, 0] = np.maximum(sup[:, 0], pos.max(axis=1))
        for si, stride in ((1, 2), (2, 4)):
            cols = idx % stride == 0
            if cols.any():
                sup[:, si] = np.maximum(sup[:, si], pos[:, cols].max(axis=1))
        cum = pos[:, -1]
    return sup


def ball_exit_core(
    gen,
    n_paths,
    n_steps,
    dt,
    x0,
    center,
    radius,
    outside,
    antithetic,
    bridge_gen=None,
    trace_a=0.0,
):
    """First exit (fine index, -1 if none) from a ball or its complement.

    `gen(s0, s1)` yields (n_paths, s1-s0, d) increments.  With
    `bridge_gen` set (diffusive models), sub-step exits between two
    interior monitored points are flagged with the half-space bridge
    probability exp(-2*d1*d2*dim/(tr A * stride * dt)).
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    dim = x0.shape[1]
    center = np.asarray(center, dtype=float)
    n_out = 2 * n_paths if antithetic else n_paths
    if x0.shape[0] == 1:
        x0 = np.broadcast_to(x0, (n_paths, dim))
    pos = np.repeat(x0, 2, axis=0) if antithetic else np.array(x0, dtype=float)
    exit_step = np.full((n_out, 3), -1, dtype=np.int64)
    start_dist = np.sqrt(((pos - center) ** 2).sum(axis=1))
    prev_delta = np.abs(start_dist - radius)
    for s0 in range(0, n_steps, CHUNK_STEPS):
        s1 = min(n_steps, s0 + CHUNK_STEPS)
        inc = _expand(gen(s0, s1), antithetic)
        p = np.cumsum(inc, axis=1)
        p += pos[:, None, :]
        dist = np.sqrt(((p - center[None, None, :]) ** 2).sum(axis=2))
        out_mask = dist >= radius if not outside else dist <= radius
        idx = np.arange(s0 + 1, s1 + 1)
        for si, stride in enumerate(STRIDES):
            cols = idx % stride == 0
            if not cols.any():
                continue
            fine = idx[cols]
            events = out_mask[:, cols]
            if bridge_gen is not None and trace_a > 0:
                deltas = np.abs(dist[:, cols] - radius)
                d_prev = np.concatenate(
                    [prev_delta[:, None], deltas[:, :-1]], axis=1
                )
                interior = ~events & ~np.concatenate(
                    [
                        np.zeros((n_out, 1), dtype=bool),
                        out_mask[:, cols][:, :-1],
                    ],
                    axis=1,
                )
                arg = 2.0 * d_prev * deltas * dim / (trace_a * stride * dt)
                near = arg < BRIDGE_ARG_CAP
                if near.any():
                    prob = np.where(near, np.exp(-np.minimum(arg, 700.0)), 0.0)
                    bu = _expand_cols(bridge_gen(fine, stride), antithetic)
                    events = events | (interior & near & (bu < prob))
            hit = events.any(axis=1)
            first = events.argmax(axis=1)
            fresh = hit & (exit_step[:, si] < 0)
            exit_step[fresh, si] = fine[first[fresh]]
        pos = p[:, -1, :]
        prev_delta = np.abs(dist[:, -1] - radius)
        if (exit_step >= 0).all():
            break
    return exit_step


def _expand_cols(u: np.ndarray, antithetic: bool) -> np.ndarray:
    # Bridge uniforms are shared by the antithetic pair (same draws,
    # mirrored increments).
    return np.repeat(u, 2, axis=0) if antithetic else u


def domain_exit_core(gen, n_paths, n_steps, x0, signed_distance, antithetic):
    """First exit from a general domain given its signed distance.

    Same monitoring rules as `ball_exit_core` but membership comes from
    a vectorized signed-distance callable (negative inside); no bridge
    correction.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    dim = x0.shape[1]
    n_out = 2 * n_paths if antithetic else n_paths
    if x0.shape[0] == 1:
        x0 = np.broadcast_to(x0, (n_paths, dim))
    pos = np.repeat(x0, 2, axis=0) if antithetic else np.array(x0, dtype=float)
    exit_step = np.full((n_out, 3), -1, dtype=np.int64)
    for s0 in range(0, n_steps, CHUNK_STEPS):
        s1 = min(n_steps, s0 + CHUNK_STEPS)
        inc = _expand(gen(s0, s1), antithetic)
        p = np.cumsum(inc, axis=1)
        p += pos[:, None, :]
        flat = p.reshape(-1, dim)
        out_mask = (signed_distance(flat) >= 0.0).reshape(p.shape[:2])
        idx = np.arange(s0 + 1, s1 + 1)
        for si, stride in enumerate(STRIDES):
            cols = idx % stride == 0
            if not cols.any():
                continue
            events = out_mask[:, cols]
            hit = events.any(axis=1)
            first = events.argmax(axis=1)
            fresh = hit & (exit_step[:, si] < 0)
            exit_step[fresh, si] = idx[cols][first[fresh]]
        pos = p[:, -1, :]
        if (exit_step >= 0).all():
            break
    return exit_step


def interval_exit_core(gen, n_paths, n_steps, halfwidth, antithetic):
    """Exit steps from (-h, h) at strides 1/2/4, plus stride-1 suprema."""
    n_out = 2 * n_paths if antithetic else n_paths
    cum = np.zeros(n_out)
    sup = np.zeros(n_out)
    exit_step = np.full((n_out, 3), -1, dtype=np.int64)
    for s0 in range(0, n_steps, CHUNK_STEPS):
        s1 = min(n_steps, s0 + CHUNK_STEPS)
        inc = _expand(gen(s0, s1), antithetic)
        pos = np.cumsum(inc, axis=1)
        pos += cum[:, None]
        sup = np.maximum(sup, pos.max(axis=1))
        out_mask = np.abs(pos) >= halfwidth
        idx = np.arange(s0 + 1, s1 + 1)
        for si, stride in enumerate(STRIDES):
            cols = idx % stride == 0
            if not cols.any():
                continue
            events = out_mask[:, cols]
            hit = events.any(axis=1)
            first = events.argmax(axis=1)
            fresh = hit & (exit_step[:, si] < 0)
            exit_step[fresh, si] = idx[cols][first[fresh]]
        cum = pos[:, -1]
    return exit_step, sup


def _law_gen(law, params, seed, stream, path_lo, n_paths, dt, two_d):
    def gen(s0, s1):
        inc = laws.increments(
            law, params, seed, stream, path_lo, n_paths, np.arange(s0, s1), dt
        )
        if two_d:
            return np.stack(inc, axis=2)
        return inc

    return gen


def running_sup(law, params, seed, stream, path_lo, n_paths, n_steps, dt,
                antithetic=False):
    if law not in laws.ONE_DIM:
        raise ValueError("running_sup expects a 1-d law")
    gen = _law_gen(law, params, seed, stream, path_lo, n_paths, dt, False)
    return running_sup_core(gen, n_paths, n_steps, antithetic)


def disk_exit(law, params, seed, stream, path_lo, n_paths, n_steps, dt, x0,
              center, radius, outside=False, bridge=False, antithetic=False):
    if law not in laws.TWO_DIM:
        raise ValueError("disk_exit expects a 2-d law")
    gen = _law_gen(law, params, seed, stream, path_lo, n_paths, dt, True)
    bridge_gen = None
    trace_a = 0.0
    if bridge and law in laws.DIFFUSIVE:
        trace_a = laws.trace_from_params(law, np.asarray(params, dtype=float))

        def bridge_gen(fine_idx, stride):
            return laws.bridge_uniforms(
                law, seed, stream, path_lo, n_paths, fine_idx - 1, stride
            )

    return ball_exit_core(
        gen, n_paths, n_steps, dt, x0, center, radius, outside, antithetic,
        bridge_gen=bridge_gen, trace_a=trace_a,
    )


def interval_exit(law, params, seed, stream, path_lo, n_paths, n_steps, dt,
                  halfwidth, antithetic=False):
    if law not in laws.ONE_DIM:
        raise ValueError("interval_exit expects a 1-d law")
    gen = _law_gen(law, params, seed, stream, path_lo, n_paths, dt, False)
    return interval_exit_core(gen, n_paths, n_steps, halfwidth, antithetic)
