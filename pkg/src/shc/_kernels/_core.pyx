# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: fused increment generation + path reductions.

Randomness, slot layout and monitoring rules mirror `fallback.py`
exactly (counter-addressed Philox4x64-10 streams), so both backends
produce the same numbers up to floating-point library differences.
"""

import numpy as np

from libc.stdint cimport uint64_t
from libc.math cimport sqrt, log1p, sin, cos, exp, pow, fabs, M_PI

cdef extern from *:
    """
    typedef unsigned __int128 shc_u128;
    static inline unsigned long long shc_mulhi64(unsigned long long a,
                                                 unsigned long long b) {
        return (unsigned long long)(((shc_u128)a * (shc_u128)b) >> 64);
    }
    """
    uint64_t shc_mulhi64(uint64_t a, uint64_t b) nogil

BACKEND = "compiled"

cdef uint64_t M0 = 0xD2E7470EE14C6C93ULL
cdef uint64_t M1 = 0xCA5A826395121157ULL
cdef uint64_t W0 = 0x9E3779B97F4A7C15ULL
cdef uint64_t W1 = 0xBB67AE8584CAA73BULL
cdef double INV53 = 1.0 / 9007199254740992.0
cdef double TINY = 2.0 ** -54

cdef int GAUSS1D = 1
cdef int STABLE1D = 2
cdef int JD1D = 3
cdef int GAUSS2D = 4
cdef int STABLE2D = 5
cdef int JD2D = 6

cdef uint64_t PATH_BITS_SHIFT = 40


cdef inline void philox4(uint64_t c0, uint64_t c1, uint64_t c2, uint64_t c3,
                         uint64_t k0, uint64_t k1, uint64_t* out) nogil:
    cdef int i
    cdef uint64_t hi0, lo0, hi1, lo1
    for i in range(10):
        hi0 = shc_mulhi64(M0, c0)
        lo0 = M0 * c0
        hi1 = shc_mulhi64(M1, c2)
        lo1 = M1 * c2
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + W0
        k1 = k1 + W1
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3


cdef inline void cell_uniforms(uint64_t step, uint64_t block, uint64_t draw,
                               uint64_t k0, uint64_t k1, double* u) nogil:
    cdef uint64_t w[4]
    philox4(step, block, draw, 0, k0, k1, w)
    u[0] = <double>(w[0] >> 11) * INV53
    u[1] = <double>(w[1] >> 11) * INV53
    u[2] = <double>(w[2] >> 11) * INV53
    u[3] = <double>(w[3] >> 11) * INV53


cdef inline void box_muller(double u0, double u1, double* z0, double* z1) nogil:
    cdef double r = sqrt(-2.0 * log1p(-u0))
    cdef double a = 2.0 * M_PI * u1
    z0[0] = r * cos(a)
    z1[0] = r * sin(a)


cdef inline double box_muller_first(double u0, double u1) nogil:
    # First normal of the pair only; the second is never consumed.
    return sqrt(-2.0 * log1p(-u0)) * cos(2.0 * M_PI * u1)


cdef inline double cms_symmetric(double beta, double u0, double u1) nogil:
    cdef double U = M_PI * ((u0 if u0 > TINY else TINY) - 0.5)
    cdef double E = -log1p(-u1)
    if beta == 1.0:
        return sin(U) / cos(U)
    return (sin(beta * U) / pow(cos(U), 1.0 / beta)) * pow(
        cos((1.0 - beta) * U) / E, (1.0 - beta) / beta)


cdef inline double kanter_subordinator(double alpha, double u0, double u1) nogil:
    cdef double U = M_PI * (u0 if u0 > TINY else TINY)
    cdef double E = -log1p(-u1)
    cdef double num, a
    if E < 1e-300:
        E = 1e-300
    if alpha == 0.5:
        return 1.0 / (2.0 * (1.0 + cos(U)) * E)
    num = pow(sin(alpha * U), alpha) * pow(
        sin((1.0 - alpha) * U), 1.0 - alpha)
    a = pow(num / sin(U), 1.0 / (1.0 - alpha))
    return pow(a / E, (1.0 - alpha) / alpha)


cdef struct LawCtx:
    int law
    double sigma_sqdt      # 1-d gaussian factor
    double stable_fac      # scale * dt**(1/beta)
    double beta
    double l11s, l21s, l22s  # cholesky rows * sqrt(dt)


cdef inline void make_ctx(int law, double[::1] params, double dt, LawCtx* ctx) nogil:
    cdef double sqdt = sqrt(dt)
    ctx.law = law
    if law == GAUSS1D:
        ctx.sigma_sqdt = params[0] * sqdt
    elif law == STABLE1D:
        ctx.beta = params[0]
        ctx.stable_fac = params[1] * pow(dt, 1.0 / params[0])
    elif law == JD1D:
        ctx.sigma_sqdt = params[0] * sqdt
        ctx.beta = params[1]
        ctx.stable_fac = params[2] * pow(dt, 1.0 / params[1])
    elif law == GAUSS2D:
        ctx.l11s = params[0] * sqdt
        ctx.l21s = params[1] * sqdt
        ctx.l22s = params[2] * sqdt
    elif law == STABLE2D:
        ctx.beta = params[0]
        ctx.stable_fac = params[1] * pow(dt, 1.0 / params[0])
    elif law == JD2D:
        ctx.l11s = params[0] * sqdt
        ctx.l21s = params[1] * sqdt
        ctx.l22s = params[2] * sqdt
        ctx.beta = params[3]
        ctx.stable_fac = params[4] * pow(dt, 1.0 / params[3])


cdef inline double inc_1d(LawCtx* ctx, uint64_t step, uint64_t k0, uint64_t k1) nogil:
    cdef double u[4]
    cdef double z0, z1, s
    cell_uniforms(step, 0, 0, k0, k1, u)
    if ctx.law == GAUSS1D:
        return ctx.sigma_sqdt * box_muller_first(u[0], u[1])
    if ctx.law == STABLE1D:
        s = cms_symmetric(ctx.beta, u[0], u[1])
        return ctx.stable_fac * s
    # JD1D
    z0 = box_muller_first(u[0], u[1])
    s = cms_symmetric(ctx.beta, u[2], u[3])
    return ctx.sigma_sqdt * z0 + ctx.stable_fac * s


cdef inline void inc_2d(LawCtx* ctx, uint64_t step, uint64_t k0, uint64_t k1,
                        double* ix, double* iy) nogil:
    cdef double u[4]
    cdef double u2[4]
    cdef double z0, z1, w0, w1, sub, fac
    cell_uniforms(step, 0, 0, k0, k1, u)
    if ctx.law == GAUSS2D:
        box_muller(u[0], u[1], &z0, &z1)
        ix[0] = ctx.l11s * z0
        iy[0] = ctx.l21s * z0 + ctx.l22s * z1
        return
    if ctx.law == STABLE2D:
        sub = kanter_subordinator(ctx.beta / 2.0, u[0], u[1])
        box_muller(u[2], u[3], &w0, &w1)
        fac = ctx.stable_fac * sqrt(2.0 * sub)
        ix[0] = fac * w0
        iy[0] = fac * w1
        return
    # JD2D
    box_muller(u[0], u[1], &z0, &z1)
    cell_uniforms(step, 1, 0, k0, k1, u2)
    sub = kanter_subordinator(ctx.beta / 2.0, u2[0], u2[1])
    box_muller(u2[2], u2[3], &w0, &w1)
    fac = ctx.stable_fac * sqrt(2.0 * sub)
    ix[0] = ctx.l11s * z0 + fac * w0
    iy[0] = ctx.l21s * z0 + ctx.l22s * z1 + fac * w1


cdef inline double bridge_uniform(uint64_t step, int stride,
                                  uint64_t k0, uint64_t k1) nogil:
    cdef double u[4]
    if stride == 1:
        cell_uniforms(step, 0, 0, k0, k1, u)
        return u[2]
    if stride == 2:
        cell_uniforms(step, 0, 0, k0, k1, u)
        return u[3]
    cell_uniforms(step, 2, 0, k0, k1, u)
    return u[0]


def running_sup(int law, double[::1] params, object seed, long stream,
                long path_lo, long n_paths, long n_steps, double dt,
                bint antithetic=False):
    """Running suprema (clipped at 0) at strides 1/2/4; (n_out, 3)."""
    cdef uint64_t k0 = <uint64_t>(int(seed) & ((1 << 64) - 1))
    cdef uint64_t kbase = (<uint64_t>stream) << PATH_BITS_SHIFT
    cdef long n_out = 2 * n_paths if antithetic else n_paths
    out_arr = np.zeros((n_out, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef LawCtx ctx
    make_ctx(law, params, dt, &ctx)
    cdef long i, j
    cdef uint64_t k1, fine
    cdef double di, cp, cm
    cdef double sp0, sp1, sp2, sm0, sm1, sm2
    with nogil:
        for i in range(n_paths):
            k1 = kbase + <uint64_t>(path_lo + i)
            cp = 0.0
            cm = 0.0
            sp0 = sp1 = sp2 = 0.0
            sm0 = sm1 = sm2 = 0.0
            for j in range(n_steps):
                di = inc_1d(&ctx, <uint64_t>j, k0, k1)
                cp += di
                fine = <uint64_t>(j + 1)
                if cp > sp0:
                    sp0 = cp
                if (fine & 1) == 0 and cp > sp1:
                    sp1 = cp
                if (fine & 3) == 0 and cp > sp2:
                    sp2 = cp
                if antithetic:
                    cm -= di
                    if cm > sm0:
                        sm0 = cm
                    if (fine & 1) == 0 and cm > sm1:
                        sm1 = cm
                    if (fine & 3) == 0 and cm > sm2:
                        sm2 = cm
            if antithetic:
                out[2 * i, 0] = sp0
                out[2 * i, 1] = sp1
                out[2 * i, 2] = sp2
                out[2 * i + 1, 0] = sm0
                out[2 * i + 1, 1] = sm1
                out[2 * i + 1, 2] = sm2
            else:
                out[i, 0] = sp0
                out[i, 1] = sp1
                out[i, 2] = sp2
    return out_arr


def disk_exit(int law, double[::1] params, object seed, long stream,
              long path_lo, long n_paths, long n_steps, double dt,
              object x0, double cx, double cy, double radius,
              bint outside=False, bint bridge=False, bint antithetic=False):
    """First-exit fine indices (or -1) from a disk/its complement; (n_out, 3)."""
    cdef uint64_t k0 = <uint64_t>(int(seed) & ((1 << 64) - 1))
    cdef uint64_t kbase = (<uint64_t>stream) << PATH_BITS_SHIFT
    cdef long n_out = 2 * n_paths if antithetic else n_paths
    x0_arr = np.array(np.broadcast_to(
        np.atleast_2d(np.asarray(x0, dtype=np.float64)), (n_paths, 2)),
        dtype=np.float64, order="C")
    cdef double[:, ::1] starts = x0_arr
    out_arr = np.full((n_out, 3), -1, dtype=np.int64)
    cdef long[:, ::1] out = out_arr
    cdef LawCtx ctx
    make_ctx(law, params, dt, &ctx)
    cdef bint use_bridge = bridge and (law == GAUSS2D or law == JD2D)
    cdef double trace_a = 0.0
    if use_bridge:
        trace_a = (params[0] * params[0] + params[1] * params[1]
                   + params[2] * params[2])
    cdef long i, j, si, sgn, nsgn
    cdef uint64_t k1, fine
    cdef long strides[3]
    strides[0] = 1
    strides[1] = 2
    strides[2] = 4
    cdef double dx, dy, rx, ry
    cdef double px[2]
    cdef double py[2]
    cdef double prev_delta[2][3]
    cdef long ex[2][3]
    cdef double dist, delta, prob, bu, arg
    cdef bint outflag, alldone
    nsgn = 2 if antithetic else 1
    with nogil:
        for i in range(n_paths):
            k1 = kbase + <uint64_t>(path_lo + i)
            for sgn in range(nsgn):
                px[sgn] = starts[i, 0]
                py[sgn] = starts[i, 1]
                rx = px[sgn] - cx
                ry = py[sgn] - cy
                dist = sqrt(rx * rx + ry * ry)
                for si in range(3):
                    prev_delta[sgn][si] = fabs(dist - radius)
                    ex[sgn][si] = -1
            for j in range(n_steps):
                inc_2d(&ctx, <uint64_t>j, k0, k1, &dx, &dy)
                fine = <uint64_t>(j + 1)
                alldone = True
                for sgn in range(nsgn):
                    if sgn == 0:
                        px[0] += dx
                        py[0] += dy
                    else:
                        px[1] -= dx
                        py[1] -= dy
                    rx = px[sgn] - cx
                    ry = py[sgn] - cy
                    dist = sqrt(rx * rx + ry * ry)
                    delta = fabs(dist - radius)
                    for si in range(3):
                        if (fine & (<uint64_t>strides[si] - 1)) != 0:
                            if ex[sgn][si] < 0:
                                alldone = False
                            continue
                        if ex[sgn][si] >= 0:
                            continue
                        outflag = (dist >= radius) if not outside else (dist <= radius)
                        if outflag:
                            ex[sgn][si] = <long>fine
                        elif use_bridge:
                            arg = (2.0 * prev_delta[sgn][si] * delta * 2.0
                                   / (trace_a * strides[si] * dt))
                            if arg < 40.0:
                                prob = exp(-arg)
                                bu = bridge_uniform(<uint64_t>j, strides[si], k0, k1)
                                if bu < prob:
                                    ex[sgn][si] = <long>fine
                        prev_delta[sgn][si] = delta
                        if ex[sgn][si] < 0:
                            alldone = False
                if alldone:
                    break
            for sgn in range(nsgn):
                for si in range(3):
                    if antithetic:
                        out[2 * i + sgn, si] = ex[sgn][si]
                    else:
                        out[i, si] = ex[0][si]
    return out_arr


def interval_exit(int law, double[::1] params, object seed, long stream,
                  long path_lo, long n_paths, long n_steps, double dt,
                  double halfwidth, bint antithetic=False):
    """Exit fine indices from (-h, h) at strides 1/2/4 plus stride-1 sup."""
    cdef uint64_t k0 = <uint64_t>(int(seed) & ((1 << 64) - 1))
    cdef uint64_t kbase = (<uint64_t>stream) << PATH_BITS_SHIFT
    cdef long n_out = 2 * n_paths if antithetic else n_paths
    ex_arr = np.full((n_out, 3), -1, dtype=np.int64)
    sup_arr = np.zeros(n_out, dtype=np.float64)
    cdef long[:, ::1] ex = ex_arr
    cdef double[::1] sup = sup_arr
    cdef LawCtx ctx
    make_ctx(law, params, dt, &ctx)
    cdef long i, j, si, sgn, nsgn
    cdef uint64_t k1, fine
    cdef long strides[3]
    strides[0] = 1
    strides[1] = 2
    strides[2] = 4
    cdef double di
    cdef double pos[2]
    cdef long exl[2][3]
    cdef double supl[2]
    cdef bint alldone
    nsgn = 2 if antithetic else 1
    with nogil:
        for i in range(n_paths):
            k1 = kbase + <uint64_t>(path_lo + i)
            for sgn in range(nsgn):
                pos[sgn] = 0.0
                supl[sgn] = 0.0
                for si in range(3):
                    exl[sgn][si] = -1
            for j in range(n_steps):
                di = inc_1d(&ctx, <uint64_t>j, k0, k1)
                fine = <uint64_t>(j + 1)
                for sgn in range(nsgn):
                    if sgn == 0:
                        pos[0] += di
                    else:
                        pos[1] -= di
                    if pos[sgn] > supl[sgn]:
                        supl[sgn] = pos[sgn]
                    for si in range(3):
                        if exl[sgn][si] >= 0:
                            continue
                        if (fine & (<uint64_t>strides[si] - 1)) != 0:
                            continue
                        if fabs(pos[sgn]) >= halfwidth:
                            exl[sgn][si] = <long>fine
            for sgn in range(nsgn):
                if antithetic:
                    sup[2 * i + sgn] = supl[sgn]
                    for si in range(3):
                        ex[2 * i + sgn, si] = exl[sgn][si]
                else:
                    sup[i] = supl[0]
                    for si in range(3):
                        ex[i, si] = exl[0][si]
    return ex_arr, sup_arr
