"""Symmetric Levy models and their samplers.

A model is the triplet (A, 0, J dx): an optional non-degenerate
diffusion matrix plus an isotropic jump part, either

* ``ExactStableJumps(beta)`` - the standard isotropic beta-stable law
  (characteristic exponent |xi|^beta), sampled in closed form via
  subordination, or
* ``RadialDensityJumps`` - an explicit radial density j(r) tied to a
  scaling profile, sampled by Levy-Ito decomposition: compound Poisson
  above a cutoff plus a second-moment-matched Gaussian substitute for
  the small jumps.

Batch samplers route closed-form laws to the compiled kernels and
density models to the numpy engines; both use the same counter-based
per-path streams, so any path is reproducible in isolation.

Density-model slot layout (Philox blocks per (path, step) cell):
    block 0: diffusion normals (Box-Muller pairs)
    block 1: small-jump normals
    block 2: u0 -> Poisson jump count
    block 3: bridge uniforms (slots 0/1/2 for strides 1/2/4)
    block 64+q: jump q: u0 -> radius, u1 (,u2) -> direction
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import stats

from . import rng
from ._kernels import fallback as engines
from ._kernels import laws
from . import _kernels
from .errors import InvalidCutoffError, InvalidModelError
from .scaling import (
    RadialJumpDensity,
    ScaleFunction,
    ScalingProfile,
    Variation,
    VariationClass,
    classify_by_profile,
    eval_phi,
    invert_monotone,
    levy_tail_mass,
    small_jump_second_moment,
)

PATH_CHUNK = 4096

JUMP_COUNT_BLOCK = 2
DENSITY_BRIDGE_BLOCK = 3


def stable_levy_constant(d: int, beta: float) -> float:
    """Levy density constant c with J(x) = c |x|^(-d-beta) for the
    standard isotropic beta-stable process (exponent |xi|^beta)."""
    return (
        beta
        * 2.0 ** (beta - 1.0)
        * math.gamma((d + beta) / 2.0)
        / (math.pi ** (d / 2.0) * math.gamma(1.0 - beta / 2.0))
    )


@dataclass(frozen=True)
class ExactStableJumps:
    beta: float

    def __post_init__(self):
        if not (0 < self.beta < 2):
            raise InvalidModelError("stable index must lie in (0, 2)")


@dataclass(frozen=True)
class RadialDensityJumps:
    density: RadialJumpDensity
    profile: ScalingProfile
    c_lower: float = 1.0
    c_upper: float = 1.0


Jumps = Union[ExactStableJumps, RadialDensityJumps]


@dataclass(frozen=True, eq=False)
class LevyModel:
    dimension: int
    diffusion: Optional[np.ndarray] = None
    jumps: Optional[Jumps] = None
    isotropic: bool = True
    declared_variation: Optional[Variation] = None
    name: str = "model"

    def __post_init__(self):
        if self.dimension < 2:
            raise InvalidModelError("models live in dimension >= 2")
        if self.diffusion is not None:
            a = np.asarray(self.diffusion, dtype=float)
            if a.shape != (self.dimension, self.dimension):
                raise InvalidModelError("diffusion matrix has wrong shape")
            if not np.allclose(a, a.T, atol=1e-12):
                raise InvalidModelError("diffusion matrix must be symmetric")
            eig = np.linalg.eigvalsh(a)
            if np.all(np.abs(eig) < 1e-15):
                object.__setattr__(self, "diffusion", None)
            elif np.any(eig <= 0):
                raise InvalidModelError(
                    "diffusion matrix must be zero or positive-definite"
                )
            else:
                object.__setattr__(self, "diffusion", a)
        if self.jumps is None and self.diffusion is None:
            raise InvalidModelError("model needs a diffusion or a jump part")
        if not self.isotropic:
            raise InvalidModelError(
                "only isotropic jump laws are sampled in this version; "
                "the field is reserved"
            )
        object.__setattr__(self, "_cache", {})
        if isinstance(self.jumps, RadialDensityJumps):
            # A Levy measure must integrate 1 ∧ |x|^2.
            den = self.jumps.density
            try:
                second = small_jump_second_moment(den, den.R0)
                tail = levy_tail_mass(den, den.R0)
            except Exception as exc:
                raise InvalidModelError(
                    f"jump density fails the 1∧|x|^2 integrability check: {exc}"
                ) from exc
            if not (np.isfinite(second) and np.isfinite(tail)):
                raise InvalidModelError("jump density is not a Levy density")

    @property
    def has_diffusion(self) -> bool:
        return self.diffusion is not None

    @property
    def A_norm(self) -> float:
        if self.diffusion is None:
            return 0.0
        return float(np.linalg.eigvalsh(self.diffusion)[-1])

    @property
    def jump_density(self) -> Optional[RadialJumpDensity]:
        if self.jumps is None:
            return None
        if isinstance(self.jumps, RadialDensityJumps):
            return self.jumps.density
        c = stable_levy_constant(self.dimension, self.jumps.beta)
        beta = self.jumps.beta
        d = self.dimension
        return RadialJumpDensity(
            dimension=d,
            density=lambda s: c * s ** (-d - beta),
            R0=1.0,
            tail="power",
            tail_exponent=beta,
        )

    @property
    def profile(self) -> Optional[ScalingProfile]:
        if self.jumps is None:
            return None
        if isinstance(self.jumps, RadialDensityJumps):
            return self.jumps.profile
        beta = self.jumps.beta
        return ScalingProfile(
            psi=lambda r: np.asarray(r, dtype=float) ** beta,
            R0=1.0,
            alpha=beta,
            C_psi=1.0,
            name=f"stable[{beta}]",
        )

    def scale_function(self) -> ScaleFunction:
        sf = self._cache.get("scale_function")
        if sf is None:
            sf = ScaleFunction(self.profile, self.A_norm)
            self._cache["scale_function"] = sf
        return sf


def classify_variation(
    model: LevyModel, declared: Optional[VariationClass | Variation] = None
) -> VariationClass:
    """Bounded vs unbounded variation, with the divergence diagnostic.

    An explicit declaration (argument or model field) is authoritative
    when the diagnostic is inconclusive; a clear contradiction raises.
    """
    if isinstance(declared, VariationClass):
        declared = declared.kind
    if declared is None:
        declared = model.declared_variation
    return classify_by_profile(model.profile, model.has_diffusion, declared)


@dataclass(frozen=True)
class PathGrid:
    """Uniform monitoring grid s_k = k t / n with a small-jump cutoff."""

    horizon: float
    steps: int
    cutoff: Optional[float] = None

    def __post_init__(self):
        if self.horizon <= 0:
            raise ValueError("horizon must be positive")
        if self.steps < 1:
            raise ValueError("need at least one step")
        if self.cutoff is not None and self.cutoff <= 0:
            raise InvalidCutoffError("cutoff must be positive")

    @property
    def dt(self) -> float:
        return self.horizon / self.steps


@dataclass(frozen=True)
class Path:
    positions: np.ndarray  # (n+1, d), first row = x0
    grid: PathGrid
    seed: Optional[int] = None
    cutoff: Optional[float] = None


@dataclass(frozen=True)
class ExitRecord:
    exited: bool
    exit_step: Optional[int]
    exit_time_estimate: Optional[float]


def default_cutoff(model: LevyModel, t: float) -> float:
    """min(R0/100, phi^{-1}(t)/10), the natural space-time scale."""
    den = model.jump_density
    if den is None:
        raise InvalidCutoffError("pure-diffusion model has no jump cutoff")
    R0 = den.R0
    sf = model.scale_function()
    hi = min(R0, sf.R0) if np.isfinite(sf.R0) else R0
    try:
        phi_hi = eval_phi(sf, hi)
        if t >= phi_hi:
            inv = hi
        else:
            inv = invert_monotone(lambda r: eval_phi(sf, r), t, (1e-12 * hi, hi))
    except Exception:
        inv = hi
    return min(R0 / 100.0, inv / 10.0)


def resolve_cutoff(model: LevyModel, grid: PathGrid) -> float:
    if grid.cutoff is not None:
        den = model.jump_density
        if den is not None and grid.cutoff > den.R0:
            raise InvalidCutoffError("cutoff exceeds R0")
        return grid.cutoff
    return default_cutoff(model, grid.horizon)


# ---------------------------------------------------------------------------
# closed-form single-draw samplers (stateful Generator API)
# ---------------------------------------------------------------------------


def sample_stable_increment(beta: float, dt: float, rng_: np.random.Generator) -> float:
    """One increment of the standard symmetric beta-stable law over dt.

    Distributed as dt**(1/beta) * S with S the standard symmetric
    stable variate (characteristic function exp(-|xi|^beta)).
    """
    if not (0 < beta < 2):
        raise ValueError("stable index must lie in (0, 2)")
    if dt <= 0:
        raise ValueError("dt must be positive")
    u = rng_.random(2)
    s = laws.cms_symmetric(beta, np.array([u[0]]), np.array([u[1]]))[0]
    return float(dt ** (1.0 / beta) * s)


def sample_isotropic_stable_increment(
    beta: float, dt: float, d: int, rng_: np.random.Generator
) -> np.ndarray:
    """One d-vector increment of the standard isotropic stable law."""
    u = rng_.random(2)
    sub = laws.kanter_subordinator(beta / 2.0, np.array([u[0]]), np.array([u[1]]))[0]
    z = rng_.standard_normal(d)
    return dt ** (1.0 / beta) * math.sqrt(2.0 * sub) * z


class RadiusSampler:
    """Inverse-tail sampler for jump radii above a cutoff.

    Solves Lambda(s) = v * Lambda(eps) by log-log interpolation on
    (eps, R0] plus the analytic power-tail inverse beyond R0.
    """

    def __init__(self, model: LevyModel, eps: float, nodes: int = 512):
        den = model.jump_density
        if den is None:
            raise InvalidCutoffError("model has no jumps")
        self.eps = float(eps)
        self.R0 = den.R0
        self.total = levy_tail_mass(den, eps)
        if not (self.total > 0 and np.isfinite(self.total)):
            raise InvalidCutoffError(
                f"tail mass at cutoff {eps} is {self.total}"
            )
        grid = np.geomspace(eps, den.R0, nodes)
        mass = np.array([levy_tail_mass(den, s) for s in grid])
        g = mass / self.total
        if den.tail == "power":
            self.g_at_R0 = float(g[-1])
            self.tail_exponent = den.tail_exponent
        else:
            self.g_at_R0 = 0.0
            self.tail_exponent = None
        keep = g > 0
        self._x = -np.log(g[keep])  # increasing in s
        self._y = np.log(grid[keep])

    def sample(self, v: np.ndarray) -> np.ndarray:
        """Radii for tail quantiles v in (0, 1]."""
        v = np.maximum(v, 1e-300)
        out = np.empty_like(v)
        in_tail = v < self.g_at_R0
        if self.tail_exponent is not None and np.any(in_tail):
            out[in_tail] = self.R0 * (v[in_tail] / self.g_at_R0) ** (
                -1.0 / self.tail_exponent
            )
        body = ~in_tail
        x = -np.log(v[body])
        out[body] = np.exp(np.interp(x, self._x, self._y))
        return np.clip(out, self.eps, None if self.tail_exponent else self.R0)


def _radius_sampler(model: LevyModel, eps: float) -> RadiusSampler:
    key = ("radius_sampler", eps)
    hit = model._cache.get(key)
    if hit is None:
        hit = RadiusSampler(model, eps)
        model._cache[key] = hit
    return hit


def _small_jump_std(model: LevyModel, eps: float) -> float:
    key = ("small_sigma2", eps)
    hit = model._cache.get(key)
    if hit is None:
        hit = small_jump_second_moment(model.jump_density, eps)
        model._cache[key] = hit
        sigma = math.sqrt(hit)
        if sigma < 5.0 * eps:
            warnings.warn(
                f"small-jump Gaussian substitute is marginal: sigma({eps:g})="
                f"{sigma:g} < 5*cutoff; refine the cutoff",
                stacklevel=2,
            )
    return math.sqrt(hit)


def _sphere_direction(d: int, u: list[np.ndarray]) -> np.ndarray:
    """Uniform direction from cell uniforms (d = 2 or 3)."""
    if d == 2:
        ang = 2.0 * np.pi * u[0]
        return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    if d == 3:
        c = 2.0 * u[0] - 1.0
        s = np.sqrt(np.maximum(1.0 - c * c, 0.0))
        ang = 2.0 * np.pi * u[1]
        return np.stack([s * np.cos(ang), s * np.sin(ang), c], axis=-1)
    raise InvalidModelError("density sampling supports d in {2, 3}")


def sample_increment(
    model: LevyModel, dt: float, grid: PathGrid, rng_: np.random.Generator
) -> np.ndarray:
    """One d-vector increment over dt (Generator API, single draw).

    Exact-stable models use the closed-form isotropic construction;
    density models compose diffusion + compound Poisson above the
    cutoff + the small-jump Gaussian substitute.
    """
    d = model.dimension
    out = np.zeros(d)
    if model.diffusion is not None:
        chol = np.linalg.cholesky(model.diffusion)
        out += math.sqrt(dt) * (chol @ rng_.standard_normal(d))
    if isinstance(model.jumps, ExactStableJumps):
        out += sample_isotropic_stable_increment(model.jumps.beta, dt, d, rng_)
    elif isinstance(model.jumps, RadialDensityJumps):
        eps = resolve_cutoff(model, grid)
        sampler = _radius_sampler(model, eps)
        lam = dt * sampler.total
        count = int(rng_.poisson(lam))
        for _ in range(count):
            radius = sampler.sample(np.array([1.0 - rng_.random()]))[0]
            direction = rng_.standard_normal(d)
            direction /= np.linalg.norm(direction)
            out += radius * direction
        sig = _small_jump_std(model, eps)
        out += sig * math.sqrt(dt / d) * rng_.standard_normal(d)
    return out


def sample_path(
    model: LevyModel, x0, grid: PathGrid, rng_: np.random.Generator
) -> Path:
    """Cumulative sum of grid increments, prepended with x0."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (model.dimension,):
        raise ValueError("x0 has wrong dimension")
    pos = np.empty((grid.steps + 1, model.dimension))
    pos[0] = x0
    dt = grid.dt
    cutoff = None
    if isinstance(model.jumps, RadialDensityJumps):
        cutoff = resolve_cutoff(model, grid)
    for k in range(grid.steps):
        pos[k + 1] = pos[k] + sample_increment(model, dt, grid, rng_)
    return Path(positions=pos, grid=grid, cutoff=cutoff)


def project_running_sup(path: Path, nu) -> np.ndarray:
    """Running maximum of <X_{s_k} - X_0, nu> over k = 1..n.

    The estimate of sup over (0, t] is max(0, last entry); the raw
    running maximum is returned for inspection.
    """
    nu = np.asarray(nu, dtype=float)
    if abs(np.linalg.norm(nu) - 1.0) > 1e-12:
        raise ValueError("nu must be a unit vector")
    disp = (path.positions[1:] - path.positions[0]) @ nu
    return np.maximum.accumulate(disp)


def first_exit(
    path: Path,
    domain,
    rng_: Optional[np.random.Generator] = None,
    *,
    model: Optional[LevyModel] = None,
    bridge: bool = False,
) -> ExitRecord:
    """Scan grid points in order and record the first one outside.

    With `bridge=True` (diffusive models), a sub-step exit between two
    interior points is flagged with probability
    exp(-2 d_k d_{k+1} d / (tr A * dt)).
    """
    sd = domain.signed_distance(path.positions)
    x0_sd = sd[0]
    if x0_sd >= 0:
        raise ValueError("path must start inside the domain")
    outside = sd >= 0
    dt = path.grid.dt
    use_bridge = (
        bridge and model is not None and model.has_diffusion and rng_ is not None
    )
    trace_a = float(np.trace(model.diffusion)) if use_bridge else 0.0
    d = path.positions.shape[1]
    for k in range(1, len(sd)):
        if outside[k]:
            return ExitRecord(True, k, k * dt)
        if use_bridge:
            arg = 2.0 * abs(sd[k - 1]) * abs(sd[k]) * d / (trace_a * dt)
            if arg < engines.BRIDGE_ARG_CAP and rng_.random() < math.exp(-arg):
                return ExitRecord(True, k, k * dt)
    return ExitRecord(False, None, None)


# ---------------------------------------------------------------------------
# batch engines (counter-based streams, kernel-accelerated where possible)
# ---------------------------------------------------------------------------


def kernel_law_1d(model: LevyModel, nu) -> Optional[tuple[int, np.ndarray]]:
    """Kernel law for the 1-d projection <X, nu>, if it has one."""
    nu = np.asarray(nu, dtype=float)
    sigma = 0.0
    if model.diffusion is not None:
        sigma = float(np.sqrt(nu @ model.diffusion @ nu))
    if model.jumps is None:
        return laws.GAUSS1D, np.array([sigma])
    if isinstance(model.jumps, ExactStableJumps):
        beta = model.jumps.beta
        if model.diffusion is None:
            return laws.STABLE1D, np.array([beta, 1.0])
        return laws.JD1D, np.array([sigma, beta, 1.0])
    return None


def kernel_law_2d(model: LevyModel) -> Optional[tuple[int, np.ndarray]]:
    if model.dimension != 2:
        return None
    chol = (
        np.linalg.cholesky(model.diffusion)
        if model.diffusion is not None
        else np.zeros((2, 2))
    )
    packed = np.array([chol[0, 0], chol[1, 0], chol[1, 1]])
    if model.jumps is None:
        return laws.GAUSS2D, packed
    if isinstance(model.jumps, ExactStableJumps):
        beta = model.jumps.beta
        if model.diffusion is None:
            return laws.STABLE2D, np.array([beta, 1.0])
        return laws.JD2D, np.concatenate([packed, [beta, 1.0]])
    return None


def _density_gen(model, eps, dt, seed, stream, path_lo, n_paths, nu=None):
    """Increment generator for density models (see slot layout above)."""
    d = model.dimension
    sampler = _radius_sampler(model, eps)
    lam = dt * sampler.total
    sig_w = _small_jump_std(model, eps) * math.sqrt(dt / d)
    chol = (
        np.linalg.cholesky(model.diffusion) * math.sqrt(dt)
        if model.diffusion is not None
        else None
    )
    nu_arr = None if nu is None else np.asarray(nu, dtype=float)

    def gen(s0, s1):
        steps = np.arange(s0, s1)
        m = s1 - s0
        out = np.zeros((n_paths, m, d))
        u0 = rng.cell_uniforms(seed, stream, path_lo, n_paths, steps, 0)
        z0a, z0b = rng.box_muller(u0[0], u0[1])
        if chol is not None:
            gz = np.stack([z0a, z0b], axis=-1)
            if d == 3:
                z0c, _ = rng.box_muller(u0[2], u0[3])
                gz = np.concatenate([gz, z0c[..., None]], axis=-1)
            out += gz @ chol.T
        u1 = rng.cell_uniforms(seed, stream, path_lo, n_paths, steps, 1)
        w1, w2 = rng.box_muller(u1[0], u1[1])
        wz = np.stack([w1, w2], axis=-1)
        if d == 3:
            w3, _ = rng.box_muller(u1[2], u1[3])
            wz = np.concatenate([wz, w3[..., None]], axis=-1)
        out += sig_w * wz
        uc = rng.cell_uniforms(
            seed, stream, path_lo, n_paths, steps, JUMP_COUNT_BLOCK
        )
        counts = stats.poisson.ppf(np.maximum(uc[0], 1e-300), lam).astype(np.int64)
        kmax = int(counts.max()) if counts.size else 0
        for q in range(kmax):
            active = counts > q
            if not active.any():
                break
            uj = rng.cell_uniforms(
                seed, stream, path_lo, n_paths, steps, rng.JUMP_BLOCK_BASE + q
            )
            radii = sampler.sample(1.0 - uj[0])
            direction = _sphere_direction(d, uj[1:])
            out += np.where(active[..., None], radii[..., None] * direction, 0.0)
        if nu_arr is not None:
            return out @ nu_arr
        return out

    return gen


def _density_bridge_gen(model, seed, stream, path_lo, n_paths):
    slot_of = {1: 0, 2: 1, 4: 2}

    def bridge_gen(fine_idx, stride):
        u = rng.cell_uniforms(
            seed, stream, path_lo, n_paths, fine_idx - 1, DENSITY_BRIDGE_BLOCK
        )
        return u[slot_of[stride]]

    return bridge_gen


def _chunks(n: int):
    for lo in range(0, n, PATH_CHUNK):
        yield lo, min(PATH_CHUNK, n - lo)


def batch_running_sup(
    model: LevyModel,
    nu,
    t: float,
    steps: int,
    n_paths: int,
    seed: int,
    stream: int,
    *,
    cutoff: Optional[float] = None,
    antithetic: bool = True,
) -> np.ndarray:
    """Per-path running suprema of the nu-projection at strides 1/2/4.

    Returns (n_out, 3); with antithetic on, n_paths is the number of
    base paths and n_out = 2 * n_paths (pairs interleaved).
    """
    dt = t / steps
    law = kernel_law_1d(model, nu)
    parts = []
    for lo, n_c in _chunks(n_paths):
        if law is not None:
            parts.append(
                _kernels.running_sup(
                    law[0], law[1], seed, stream, lo, n_c, steps, dt, antithetic
                )
            )
        else:
            eps = cutoff if cutoff is not None else default_cutoff(model, t)
            gen = _density_gen(model, eps, dt, seed, stream, lo, n_c, nu=nu)
            parts.append(engines.running_sup_core(gen, n_c, steps, antithetic))
    return np.concatenate(parts, axis=0)


def batch_ball_exit(
    model: LevyModel,
    x0: np.ndarray,
    center,
    radius: float,
    t: float,
    steps: int,
    seed: int,
    stream: int,
    *,
    outside: bool = False,
    bridge: bool = False,
    cutoff: Optional[float] = None,
    antithetic: bool = True,
) -> np.ndarray:
    """First-exit fine indices from a ball (or its complement).

    x0 is (n_base, d) start positions; antithetic pairs share starts.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    n_base = x0.shape[0]
    dt = t / steps
    law = kernel_law_2d(model)
    center = np.asarray(center, dtype=float)
    parts = []
    for lo, n_c in _chunks(n_base):
        block = x0[lo : lo + n_c]
        if law is not None:
            parts.append(
                _kernels.disk_exit(
                    law[0], law[1], seed, stream, lo, n_c, steps, dt, block,
                    center, radius, outside, bridge, antithetic,
                )
            )
        else:
            eps = cutoff if cutoff is not None else default_cutoff(model, t)
            gen = _density_gen(model, eps, dt, seed, stream, lo, n_c)
            bridge_gen = None
            trace_a = 0.0
            if bridge and model.has_diffusion:
                bridge_gen = _density_bridge_gen(model, seed, stream, lo, n_c)
                trace_a = float(np.trace(model.diffusion))
            parts.append(
                engines.ball_exit_core(
                    gen, n_c, steps, dt, block, center, radius, outside,
                    antithetic, bridge_gen=bridge_gen, trace_a=trace_a,
                )
            )
    return np.concatenate(parts, axis=0)


def batch_domain_exit(
    model: LevyModel,
    x0: np.ndarray,
    signed_distance,
    t: float,
    steps: int,
    seed: int,
    stream: int,
    *,
    cutoff: Optional[float] = None,
    antithetic: bool = True,
) -> np.ndarray:
    """First-exit indices from a general domain via its signed distance."""
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    n_base = x0.shape[0]
    dt = t / steps
    law = kernel_law_2d(model)
    parts = []
    for lo, n_c in _chunks(n_base):
        block = x0[lo : lo + n_c]
        if law is not None:
            def gen(s0, s1, _lo=lo, _n=n_c):
                inc = laws.increments(
                    law[0], law[1], seed, stream, _lo, _n,
                    np.arange(s0, s1), dt,
                )
                return np.stack(inc, axis=2)
        else:
            eps = cutoff if cutoff is not None else default_cutoff(model, t)
            gen = _density_gen(model, eps, dt, seed, stream, lo, n_c)
        parts.append(
            engines.domain_exit_core(
                gen, n_c, steps, block, signed_distance, antithetic
            )
        )
    return np.concatenate(parts, axis=0)


def batch_interval_exit(
    model: LevyModel,
    nu,
    halfwidth: float,
    t: float,
    steps: int,
    n_paths: int,
    seed: int,
    stream: int,
    *,
    cutoff: Optional[float] = None,
    antithetic: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Exits of the nu-projection from (-h, h), plus stride-1 suprema."""
    dt = t / steps
    law = kernel_law_1d(model, nu)
    ex_parts, sup_parts = [], []
    for lo, n_c in _chunks(n_paths):
        if law is not None:
            ex, sup = _kernels.interval_exit(
                law[0], law[1], seed, stream, lo, n_c, steps, dt,
                halfwidth, antithetic,
            )
        else:
            eps = cutoff if cutoff is not None else default_cutoff(model, t)
            gen = _density_gen(model, eps, dt, seed, stream, lo, n_c, nu=nu)
            ex, sup = engines.interval_exit_core(
                gen, n_c, steps, halfwidth, antithetic
            )
        ex_parts.append(ex)
        sup_parts.append(sup)
    return np.concatenate(ex_parts, axis=0), np.concatenate(sup_parts, axis=0)
