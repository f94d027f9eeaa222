"""Simulation and quadrature toolkit for the small-time behavior of
spectral heat content of symmetric Levy processes.

The deficit |D| - Q_D(t) (heat lost by time t) is estimated by Monte
Carlo and compared against its two small-time normalizations: the
boundary integral of E[sup of the normal projection ∧ 1] for processes
of unbounded variation, and t times the nonlocal perimeter for bounded
variation.
"""

from ._kernels import backend_name
from .estimators import (
    BoundaryLayer,
    Estimate,
    UniformDomain,
    exit_probability_ball,
    halfspace_layer_integral,
    heat_content_deficit,
    perimeter,
    sup_functional,
)
from .geometry import Ball, HalfSpace, ImplicitDomain
from .harness import ExperimentConfig, run_bound_audit, run_dichotomy
from .models import ExactStableJumps, LevyModel, PathGrid, classify_variation
from .presets import make_domain, make_model
from .scaling import (
    ScaleFunction,
    ScalingProfile,
    Variation,
    VariationClass,
    eval_phi,
    eval_psi,
    invert_monotone,
    levy_tail_mass,
    tail_bounds,
    verify_wlsc,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BoundaryLayer",
    "Estimate",
    "ExactStableJumps",
    "ExperimentConfig",
    "HalfSpace",
    "ImplicitDomain",
    "LevyModel",
    "PathGrid",
    "ScaleFunction",
    "ScalingProfile",
    "UniformDomain",
    "Variation",
    "VariationClass",
    "backend_name",
    "classify_variation",
    "eval_phi",
    "eval_psi",
    "exit_probability_ball",
    "halfspace_layer_integral",
    "heat_content_deficit",
    "invert_monotone",
    "levy_tail_mass",
    "make_domain",
    "make_model",
    "perimeter",
    "run_bound_audit",
    "run_dichotomy",
    "sup_functional",
    "tail_bounds",
    "verify_wlsc",
]
