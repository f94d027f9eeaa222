"""Named model, profile, and domain presets for configs and the CLI.

Model presets: brownian{sigma2|matrix}, stable{beta}, cauchy,
jump_diffusion{sigma2, beta}, truncated_stable{beta, R0},
radial_density{formula, ...} with formula in {"stable-log",
"variable-order", "table"}.

Domain presets: ball{center, radius}, halfspace{point, normal},
implicit_ball, rounded_box{half_widths, corner_radius},
stadium{half_length, radius}.
"""

from __future__ import annotations

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import geometry as geo
from .errors import InvalidModelError, InvalidProfileError
from .models import (
    ExactStableJumps,
    LevyModel,
    RadialDensityJumps,
    stable_levy_constant,
)
from .scaling import RadialJumpDensity, ScalingProfile, Variation


def profile_power(alpha: float, R0: float = 1.0, C_psi: float = 1.0) -> ScalingProfile:
    return ScalingProfile(
        psi=lambda r: np.asarray(r, dtype=float) ** alpha,
        R0=R0, alpha=alpha, C_psi=C_psi, name=f"power[{alpha}]",
    )


def _fit_c_psi(psi, alpha: float, R0: float) -> float:
    """Empirical lower-bound constant for the weak scaling inequality."""
    r = np.geomspace(R0 * 1e-8, R0 * 0.999, 160)
    lo, hi = np.meshgrid(r, r)
    mask = lo < hi
    ratios = (psi(hi[mask]) / psi(lo[mask])) * (lo[mask] / hi[mask]) ** alpha
    return min(1.0, 0.97 * float(ratios.min()))


def profile_log_corrected(beta_log: float, R0: float = 0.5) -> ScalingProfile:
    """psi(r) = r * log(1 + 1/r)**beta_log (critical-order family).

    For beta_log <= 0 the scaling index is exactly 1; for positive
    exponents a slightly smaller index with an empirically fitted
    constant is certified.
    """
    if beta_log <= -1:
        raise InvalidProfileError("log exponent must exceed -1")

    def psi(r):
        r = np.asarray(r, dtype=float)
        return r * np.log1p(1.0 / r) ** beta_log

    if beta_log <= 0:
        alpha, c = 1.0, 1.0
    else:
        alpha = 0.95
        c = _fit_c_psi(psi, alpha, R0)
    return ScalingProfile(psi=psi, R0=R0, alpha=alpha, C_psi=c,
                          name=f"stable-log[{beta_log}]")


def profile_variable_order(alpha1: float, alpha2: float,
                           R0: float = 1.0) -> ScalingProfile:
    """psi(r) = r**(alpha1 + (alpha2 - alpha1) r), scaling index alpha1."""
    if not (0 < alpha1 <= alpha2 < 2):
        raise InvalidProfileError("need 0 < alpha1 <= alpha2 < 2")

    def psi(r):
        r = np.asarray(r, dtype=float)
        return r ** (alpha1 + (alpha2 - alpha1) * r)

    c = _fit_c_psi(psi, alpha1, R0)
    return ScalingProfile(psi=psi, R0=R0, alpha=alpha1, C_psi=c,
                          name=f"variable-order[{alpha1},{alpha2}]")


def profile_tabulated(pairs, alpha: float, C_psi: float = None,
                      tail_exponent: float = None) -> ScalingProfile:
    """Profile from (r, psi(r)) pairs via monotone-cubic interpolation."""
    pairs = np.asarray(pairs, dtype=float)
    r, v = pairs[:, 0], pairs[:, 1]
    if np.any(np.diff(r) <= 0) or np.any(np.diff(v) < 0):
        raise InvalidProfileError("table must be increasing in r and psi")
    interp = PchipInterpolator(np.log(r), np.log(v))
    lo = r[0]

    def psi(x):
        x = np.asarray(x, dtype=float)
        # power continuation below the table keeps the singular behavior
        slope0 = (np.log(v[1]) - np.log(v[0])) / (np.log(r[1]) - np.log(r[0]))
        below = x < lo
        out = np.exp(interp(np.log(np.maximum(x, lo))))
        if np.any(below):
            out = np.where(below, v[0] * (x / lo) ** slope0, out)
        return out

    R0 = float(r[-1])
    prof = ScalingProfile(
        psi=psi, R0=R0, alpha=alpha,
        C_psi=C_psi if C_psi is not None else 1.0,
        tail_exponent=tail_exponent, name="tabulated",
    )
    if C_psi is None:
        fitted = _fit_c_psi(psi, alpha, R0)
        prof = ScalingProfile(psi=psi, R0=R0, alpha=alpha, C_psi=fitted,
                              tail_exponent=tail_exponent, name="tabulated")
    return prof


def density_from_profile(profile: ScalingProfile, dimension: int,
                         constant: float = 1.0,
                         truncated: bool = False) -> RadialJumpDensity:
    """j(r) = constant / (r^d psi(r)), optionally zero beyond R0."""

    def j(s):
        s = np.asarray(s, dtype=float)
        from .scaling import eval_psi

        return constant / (s**dimension * eval_psi(profile, s))

    return RadialJumpDensity(
        dimension=dimension,
        density=j,
        R0=profile.R0,
        tail="none" if truncated else "power",
        tail_exponent=float(profile.tail_exponent),
    )


def make_model(preset: str, *, dimension: int = 2, **params) -> LevyModel:
    d = dimension
    if preset == "brownian":
        sigma2 = params.get("sigma2", 1.0)
        a = np.asarray(params.get("matrix", sigma2 * np.eye(d)), dtype=float)
        return LevyModel(dimension=d, diffusion=a, name="brownian")
    if preset in ("stable", "cauchy"):
        beta = 1.0 if preset == "cauchy" else float(params["beta"])
        return LevyModel(dimension=d, jumps=ExactStableJumps(beta),
                         name=f"stable[{beta}]")
    if preset == "jump_diffusion":
        sigma2 = params.get("sigma2", 1.0)
        a = np.asarray(params.get("matrix", sigma2 * np.eye(d)), dtype=float)
        beta = float(params["beta"])
        return LevyModel(dimension=d, diffusion=a,
                         jumps=ExactStableJumps(beta),
                         name=f"jump-diffusion[{beta}]")
    if preset == "truncated_stable":
        beta = float(params["beta"])
        R0 = float(params.get("R0", 1.0))
        prof = profile_power(beta, R0=R0)
        c = stable_levy_constant(d, beta)
        den = density_from_profile(prof, d, constant=c, truncated=True)
        declared = Variation.UNBOUNDED if beta >= 1 else Variation.BOUNDED
        return LevyModel(
            dimension=d, jumps=RadialDensityJumps(den, prof, c, c),
            declared_variation=declared, name=f"truncated-stable[{beta}]",
        )
    if preset == "radial_density":
        formula = params.get("formula", "stable-log")
        if formula == "stable-log":
            prof = profile_log_corrected(
                float(params.get("beta_log", -0.5)),
                R0=float(params.get("R0", 0.5)),
            )
            declared = Variation.UNBOUNDED
        elif formula == "variable-order":
            prof = profile_variable_order(
                float(params.get("alpha1", 1.1)),
                float(params.get("alpha2", 1.9)),
                R0=float(params.get("R0", 1.0)),
            )
            declared = Variation.UNBOUNDED
        elif formula == "table":
            prof = profile_tabulated(
                params["table"], alpha=float(params["alpha"]),
                C_psi=params.get("C_psi"),
            )
            declared = None
        else:
            raise InvalidModelError(f"unknown radial density formula {formula!r}")
        c = float(params.get("constant", 1.0))
        den = density_from_profile(prof, d, constant=c,
                                   truncated=bool(params.get("truncated", False)))
        dv = params.get("declared_variation")
        if dv is not None:
            declared = Variation(dv)
        return LevyModel(
            dimension=d, jumps=RadialDensityJumps(den, prof, c, c),
            declared_variation=declared, name=f"radial[{formula}]",
        )
    raise InvalidModelError(f"unknown model preset {preset!r}")


def make_domain(preset: str, **params) -> geo.Domain:
    if preset == "ball":
        return geo.Ball(params.get("center", [0.0, 0.0]),
                        params.get("radius", 1.0))
    if preset == "halfspace":
        return geo.HalfSpace(params["point"], params["normal"])
    if preset == "implicit_ball":
        return geo.implicit_ball(params.get("center", [0.0, 0.0]),
                                 params.get("radius", 1.0))
    if preset == "rounded_box":
        return geo.rounded_box(params.get("half_widths", [0.8, 0.6]),
                               params.get("corner_radius", 0.25))
    if preset == "stadium":
        return geo.stadium(params.get("half_length", 0.5),
                           params.get("radius", 0.3))
    raise ValueError(f"unknown domain preset {preset!r}")
