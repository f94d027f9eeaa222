"""Radial scaling profiles, the scale function, Levy tail masses, and
the bounded/unbounded-variation classifier.

A profile describes the radial function ``psi`` controlling small-jump
intensity: the jump density is comparable to ``1/(r^d psi(r))`` below
the cutoff radius ``R0``, ``psi`` is increasing, and it satisfies the
weak lower scaling bound ``psi(R)/psi(r) >= C_psi (R/r)^alpha``.
Everything downstream (exit-probability bounds, cutoff selection,
variation class) is phrased in terms of ``psi`` and the scale function

    phi(r) = r^2 / (||A|| + 2 * int_0^r s/psi(s) ds).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .errors import (
    BracketError,
    ClassificationConflictError,
    DegenerateScaleError,
    IndeterminateClassificationError,
    InvalidModelError,
    InvalidProfileError,
    QuadratureError,
)
from .quadrature import graded_integral, panelwise_cumulative


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d (2*pi^(d/2)/Gamma(d/2))."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True)
class ScalingProfile:
    """Radial profile psi on (0, R0] with its scaling certificate.

    Beyond R0 the profile extends as ``psi(R0) * (r/R0)**tail_exponent``
    (a continuous power tail); ``tail_exponent`` defaults to ``alpha``.
    """

    psi: Callable[[float], float]
    R0: float
    alpha: float
    C_psi: float = 1.0
    tail_exponent: Optional[float] = None
    name: str = "custom"

    def __post_init__(self):
        if not (self.R0 > 0):
            raise InvalidProfileError("R0 must be positive")
        if not (0 < self.alpha <= 2):
            raise InvalidProfileError("alpha must lie in (0, 2]")
        if not (0 < self.C_psi <= 1):
            raise InvalidProfileError("C_psi must lie in (0, 1]")
        if self.tail_exponent is None:
            object.__setattr__(self, "tail_exponent", self.alpha)


def _call_profile(fn, x):
    """Call a user psi on an array, looping if it is scalar-only."""
    try:
        out = np.asarray(fn(x), dtype=float)
        if out.shape != np.shape(x):
            raise TypeError
        return out
    except (TypeError, ValueError):
        flat = [float(fn(float(v))) for v in np.ravel(x)]
        return np.array(flat).reshape(np.shape(x))


def eval_psi(profile: ScalingProfile, r):
    """Evaluate psi with the power-tail extension beyond R0."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise ValueError("radius must be positive")
    vals = _call_profile(profile.psi, np.minimum(r_arr, profile.R0))
    outside = r_arr > profile.R0
    if np.any(outside):
        psi_R0 = float(profile.psi(profile.R0))
        vals = np.where(
            outside,
            psi_R0 * (r_arr / profile.R0) ** float(profile.tail_exponent),
            vals,
        )
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        raise InvalidProfileError(
            f"psi produced a non-finite or non-positive value (profile {profile.name!r})"
        )
    return vals if np.ndim(r) else float(vals)


@dataclass(frozen=True)
class WlscCertificate:
    """Result of scanning the weak lower scaling bound on a pair grid."""

    min_ratio: float
    passed: bool
    alpha: float
    C_psi: float
    n_pairs: int
    worst_pair: tuple[float, float]


def verify_wlsc(
    profile: ScalingProfile, grid: Sequence[tuple[float, float]]
) -> WlscCertificate:
    """Scan (r, R) pairs for ``psi(R)/psi(r) * (r/R)^alpha >= C_psi``."""
    pairs = list(grid)
    if not pairs:
        raise ValueError("empty pair grid")
    lo = np.array([p[0] for p in pairs], dtype=float)
    hi = np.array([p[1] for p in pairs], dtype=float)
    if np.any(lo <= 0) or np.any(hi < lo) or np.any(hi >= profile.R0):
        raise ValueError("pairs must satisfy 0 < r <= R < R0")
    ratios = (eval_psi(profile, hi) / eval_psi(profile, lo)) * (lo / hi) ** profile.alpha
    idx = int(np.argmin(ratios))
    min_ratio = float(ratios[idx])
    return WlscCertificate(
        min_ratio=min_ratio,
        passed=min_ratio >= profile.C_psi * (1.0 - 1e-10),
        alpha=profile.alpha,
        C_psi=profile.C_psi,
        n_pairs=len(pairs),
        worst_pair=(float(lo[idx]), float(hi[idx])),
    )


class ScaleFunction:
    """phi(r) = r^2 / (||A|| + 2 * int_0^r s/psi(s) ds) on (0, R0].

    The inner integral uses the graded-mesh rule (geometric panels
    toward the origin) and is cached per radius.  A pure-diffusion model
    (no jumps) is the degenerate case ``profile=None``: phi(r) =
    r^2/||A||.
    """

    def __init__(
        self,
        profile: Optional[ScalingProfile],
        A_norm: float = 0.0,
        rtol: float = 1e-8,
    ):
        if profile is None and A_norm <= 0:
            raise InvalidModelError("need a jump profile or a diffusion part")
        if A_norm < 0:
            raise InvalidModelError("operator norm must be nonnegative")
        self.profile = profile
        self.A_norm = float(A_norm)
        self.rtol = rtol
        self.R0 = profile.R0 if profile is not None else math.inf
        self._mass_cache: dict[float, float] = {}

    def mass_integral(self, r: float) -> float:
        """int_0^r s/psi(s) ds (0 when the model has no jump part)."""
        if self.profile is None:
            return 0.0
        r = float(r)
        hit = self._mass_cache.get(r)
        if hit is not None:
            return hit
        prof = self.profile
        val = graded_integral(
            lambda s: s / eval_psi(prof, s), r, rtol=self.rtol
        )
        self._mass_cache[r] = val
        return val

    def __call__(self, r: float) -> float:
        return eval_phi(self, r)


def eval_phi(sf: ScaleFunction, r) -> float:
    if np.ndim(r):
        return np.array([eval_phi(sf, float(x)) for x in np.asarray(r).ravel()])
    r = float(r)
    if not (0 < r <= sf.R0):
        raise ValueError(f"radius {r} outside (0, R0]")
    denom = sf.A_norm + 2.0 * sf.mass_integral(r)
    if denom <= 0 or not np.isfinite(denom):
        raise QuadratureError("degenerate denominator in scale function",
                              {"r": r, "denominator": denom})
    return r * r / denom


def invert_monotone(
    f: Callable[[float], float],
    t: float,
    bracket: tuple[float, float],
    *,
    tol: float = 1e-12,
    check_points: int = 64,
) -> float:
    """Bisection inverse of a nondecreasing map, verified on a grid.

    The monotonicity check runs on `check_points` points of the bracket
    first; failure raises DegenerateScaleError rather than silently
    inverting a non-monotone map.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (lo < hi):
        raise BracketError("empty bracket")
    grid = np.linspace(lo, hi, check_points)
    vals = np.array([f(x) for x in grid], dtype=float)
    if np.any(~np.isfinite(vals)):
        raise DegenerateScaleError("non-finite values on the check grid")
    diffs = np.diff(vals)
    scale = max(abs(vals[0]), abs(vals[-1]), 1e-300)
    if np.any(diffs < -1e-10 * scale):
        raise DegenerateScaleError("map is not non-decreasing on the bracket")
    f_lo, f_hi = vals[0], vals[-1]
    if not (f_lo - 1e-12 * scale <= t <= f_hi + 1e-12 * scale):
        raise BracketError(f"target {t} outside [{f_lo}, {f_hi}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < t:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class RadialJumpDensity:
    """Radial density j(s) of an isotropic Levy measure J(dx)=j(|x|)dx.

    ``density`` is valid on (0, R0].  Beyond R0 the density either
    vanishes (``tail="none"``, truncated models) or continues as the
    power tail ``j(R0) * (R0/s)**(d + tail_exponent)``.
    """

    dimension: int
    density: Callable[[float], float]
    R0: float
    tail: str = "power"
    tail_exponent: float = 1.0

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidModelError("dimension must be >= 1")
        if self.tail not in ("power", "none"):
            raise InvalidModelError(f"unknown tail kind {self.tail!r}")
        if self.tail == "power" and self.tail_exponent <= 0:
            raise InvalidModelError("power tail needs a positive exponent")

    def value(self, s):
        s_arr = np.asarray(s, dtype=float)
        inner = _call_profile(self.density, np.minimum(s_arr, self.R0))
        if self.tail == "none":
            out = np.where(s_arr > self.R0, 0.0, inner)
        else:
            j0 = float(self.density(self.R0))
            out = np.where(
                s_arr > self.R0,
                j0 * (self.R0 / s_arr) ** (self.dimension + self.tail_exponent),
                inner,
            )
        return out if np.ndim(s) else float(out)


def _density_of(model) -> RadialJumpDensity:
    if isinstance(model, RadialJumpDensity):
        return model
    density = getattr(model, "jump_density", None)
    if density is None:
        raise InvalidModelError("model has no radial jump density")
    return density


def levy_tail_mass(model, r: float) -> float:
    """J(B(0,r)^c) = omega_d * int_r^inf j(s) s^(d-1) ds."""
    den = _density_of(model)
    if r <= 0:
        raise ValueError("radius must be positive")
    d = den.dimension
    omega = sphere_area(d)
    total = 0.0
    if r < den.R0:
        val, _ = integrate.quad(
            lambda s: den.value(s) * s ** (d - 1), r, den.R0, limit=200
        )
        total += val
    if den.tail == "power":
        te = den.tail_exponent
        j0 = float(den.density(den.R0))
        start = max(r, den.R0)
        total += j0 * den.R0 ** (d + te) * start ** (-te) / te
    if not np.isfinite(total):
        raise InvalidModelError("tail integral of the jump density diverges")
    return omega * total


def small_jump_second_moment(model, eps: float) -> float:
    """int_{|x|<=eps} |x|^2 J(dx) = omega_d * int_0^eps s^(d+1) j(s) ds."""
    den = _density_of(model)
    if not (0 < eps <= den.R0):
        raise ValueError("cutoff must lie in (0, R0]")
    d = den.dimension
    val = graded_integral(lambda s: den.value(s) * s ** (d + 1), eps, rtol=1e-9)
    return sphere_area(d) * val


def tail_bounds(
    profile: ScalingProfile,
    constants: tuple[float, float, float],
    r: float,
    *,
    dimension: int,
) -> tuple[float, float]:
    """Sandwich for the tail mass at radius r <= R0/2.

    Returns ``(C1*omega_d / (2 psi(2r)),
    (omega_d*C2/(alpha*C_psi) + C3*psi(R0)) / psi(r))`` with the
    constants assembled exactly as in the tail estimate's derivation.
    """
    if r > profile.R0 / 2:
        raise ValueError("tail bounds only valid for r <= R0/2")
    if r <= 0:
        raise ValueError("radius must be positive")
    C1, C2, C3 = constants
    omega = sphere_area(dimension)
    lower = C1 * omega / (2.0 * eval_psi(profile, 2.0 * r))
    upper = (
        omega * C2 / (profile.alpha * profile.C_psi)
        + C3 * eval_psi(profile, profile.R0)
    ) / eval_psi(profile, r)
    return lower, upper


class Variation(enum.Enum):
    UNBOUNDED = "unbounded"
    BOUNDED = "bounded"


@dataclass(frozen=True)
class DivergenceDiagnostic:
    """Dyadic-level evidence for the small-jump integral int dr/psi."""

    levels: np.ndarray = field(repr=False)
    integrals: np.ndarray = field(repr=False)
    cauchy_rel: float = math.nan
    increment_ratio: float = math.nan
    log_slope: float = math.nan
    verdict: str = "inconclusive"


@dataclass(frozen=True)
class VariationClass:
    kind: Variation
    diffusion: bool
    evidence: Optional[DivergenceDiagnostic] = None

    @property
    def unbounded(self) -> bool:
        return self.kind is Variation.UNBOUNDED


def divergence_diagnostic(
    profile: ScalingProfile,
    *,
    max_levels: int = 240,
    window: int = 8,
    cauchy_rtol: float = 1e-3,
) -> DivergenceDiagnostic:
    """Probe int_0^{R0} dr/psi(r) on the dyadic grid eps_k = R0 2^-k.

    Convergent when the last `window` dyadic levels change the running
    integral by less than `cauchy_rtol` relative; divergent when the
    per-level contributions stop decaying.  Anything else is reported
    inconclusive: no finite computation decides the integral, so a user
    declaration stays authoritative.
    """
    edges = profile.R0 * 2.0 ** (-np.arange(0, max_levels + 1, dtype=float))
    def f(s):
        return 1.0 / eval_psi(profile, s)
    increments = []
    for k in range(max_levels):
        g = panelwise_cumulative(f, edges[k : k + 2])[0]
        if not np.isfinite(g):
            break
        increments.append(g)
        if k > window and sum(increments) > 1e250:
            break
    g_arr = np.array(increments)
    integrals = np.cumsum(g_arr)
    n = len(g_arr)
    if n < window + 2:
        return DivergenceDiagnostic(
            levels=np.arange(1, n + 1), integrals=integrals, verdict="divergent"
        )
    cauchy_rel = float((integrals[-1] - integrals[-1 - window]) / integrals[-1])
    tail_ratios = g_arr[-window:] / g_arr[-window - 1 : -1]
    ratio = float(np.median(tail_ratios))
    log_slope = float((integrals[-1] - integrals[-1 - window]) / (window * math.log(2)))
    if cauchy_rel < cauchy_rtol:
        verdict = "convergent"
    elif ratio >= 0.98:
        verdict = "divergent"
    else:
        verdict = "inconclusive"
    return DivergenceDiagnostic(
        levels=np.arange(1, n + 1),
        integrals=integrals,
        cauchy_rel=cauchy_rel,
        increment_ratio=ratio,
        log_slope=log_slope,
        verdict=verdict,
    )


def classify_by_profile(
    profile: Optional[ScalingProfile],
    diffusion_nondegenerate: bool,
    declared: Optional[Variation] = None,
) -> VariationClass:
    """Decide the variation class; see `models.classify_variation`."""
    if diffusion_nondegenerate:
        if declared is Variation.BOUNDED:
            raise ClassificationConflictError(
                "declared bounded variation but the diffusion part is non-degenerate"
            )
        return VariationClass(Variation.UNBOUNDED, diffusion=True)
    if profile is None:
        raise InvalidModelError("model has neither jumps nor diffusion")
    diag = divergence_diagnostic(profile)
    if diag.verdict == "divergent":
        if declared is Variation.BOUNDED:
            raise ClassificationConflictError(
                "declared bounded variation but int dr/psi diagnosed divergent"
            )
        return VariationClass(Variation.UNBOUNDED, diffusion=False, evidence=diag)
    if diag.verdict == "convergent":
        if declared is Variation.UNBOUNDED:
            raise ClassificationConflictError(
                "declared unbounded variation but int dr/psi diagnosed convergent"
            )
        return VariationClass(Variation.BOUNDED, diffusion=False, evidence=diag)
    if declared is None:
        raise IndeterminateClassificationError(
            "divergence diagnostic inconclusive; declare the variation class "
            f"explicitly (cauchy_rel={diag.cauchy_rel:.3g}, "
            f"increment_ratio={diag.increment_ratio:.3g})"
        )
    return VariationClass(declared, diffusion=False, evidence=diag)
