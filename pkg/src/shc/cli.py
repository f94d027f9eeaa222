"""Command-line interface.

Subcommands: dichotomy, supfun, perimeter, exitprob, audit, halfspace.
Experiment subcommands read a JSON config (keys as in ExperimentConfig);
the environment variable SHC_SEED overrides the config seed.  Exit
codes: 0 pass, 2 fail, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import pathlib
import sys

import numpy as np

from . import estimators as est
from . import harness, presets, rng
from ._kernels import backend_name

_EXIT = {"pass": 0, "fail": 2, "inconclusive": 3}


def _load_config(path: str) -> harness.ExperimentConfig:
    config = harness.ExperimentConfig.from_json_file(path)
    env_seed = os.environ.get("SHC_SEED")
    if env_seed is not None:
        config.seed = int(env_seed)
    return config


def _write_report(config, report, csv_text: str | None = None) -> None:
    if config.output is None:
        return
    out = pathlib.Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(
        json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"
    )
    if csv_text is not None:
        (out / "table.csv").write_text(csv_text)


def _model_from_args(args) -> tuple:
    params = {}
    if args.beta is not None:
        params["beta"] = args.beta
    if args.sigma2 is not None:
        params["sigma2"] = args.sigma2
    if args.R0 is not None:
        params["R0"] = args.R0
    model = presets.make_model(args.preset, dimension=args.dimension, **params)
    return model


def cmd_dichotomy(args) -> int:
    config = _load_config(args.config)
    report = harness.run_dichotomy(
        config, include_negligibility=args.negligibility
    )
    _write_report(config, report, report.to_csv())
    for row in report.rows:
        print(
            f"t={row.t:.3e}  deficit={row.deficit:.5e} ({row.deficit_se:.1e})"
            f"  denom={row.denom:.5e}  ratio={row.ratio:.4f} ± {row.band:.4f}"
        )
    print(
        f"extrapolated ratio {report.extrapolated_ratio:.4f} "
        f"(theta={report.fit_theta}, {report.fit_method}), "
        f"tolerance {report.tolerance}: {report.status}"
    )
    return _EXIT[report.status]


def cmd_audit(args) -> int:
    config = _load_config(args.config)
    report = harness.run_bound_audit(
        config, n_paths=args.n_paths, steps=args.steps
    )
    _write_report(config, report)
    for c in report.checks:
        print(f"{c.name:28s} {c.status:12s} {c.detail}")
    print(f"audit: {report.status}")
    return _EXIT[report.status]


def cmd_halfspace(args) -> int:
    config = _load_config(args.config)
    report = harness.run_halfspace_suite(config)
    _write_report(config, report)
    for row in report.rows:
        print(
            f"t={row['t']:.3e}  inner={row['ratio_inner']:.4f}"
            f"  half={row['ratio_half']:.4f}  outer={row['ratio_outer']:.4f}"
        )
    print(f"ordering exact: {report.ordering_exact}; {report.status}")
    return _EXIT[report.status]


def cmd_supfun(args) -> int:
    model = _model_from_args(args)
    nu = np.zeros(args.dimension)
    nu[0] = 1.0
    e = est.sup_functional(
        model, nu, args.t, args.cap, args.n_paths,
        steps=args.steps, seed=args.seed,
        stream=rng.substream(rng.STREAM_SUP, args.stream),
    )
    print(json.dumps(e.to_record(), sort_keys=True))
    return 0


def cmd_perimeter(args) -> int:
    model = _model_from_args(args)
    domain = presets.make_domain("ball", center=[0.0] * args.dimension,
                                 radius=args.radius)
    method = (est.PerimeterQuadrature() if args.method == "quadrature"
              else est.PerimeterMonteCarlo())
    e = est.perimeter(model, domain, method, budget=args.budget,
                      seed=args.seed)
    print(json.dumps(e.to_record(), sort_keys=True))
    return 0


def cmd_exitprob(args) -> int:
    model = _model_from_args(args)
    e = est.exit_probability_ball(
        model, args.r, args.t, args.n_paths, steps=args.steps,
        seed=args.seed, stream=rng.substream(rng.STREAM_EXIT, args.stream),
    )
    print(json.dumps(e.to_record(), sort_keys=True))
    return 0


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", default="brownian")
    p.add_argument("--dimension", type=int, default=2)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--sigma2", type=float, default=None)
    p.add_argument("--R0", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="shc",
        description="Spectral heat content small-time toolkit "
        f"(kernel backend: {backend_name()})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dichotomy", help="deficit/denominator ratio table")
    p.add_argument("--config", required=True)
    p.add_argument("--negligibility", action="store_true",
                   help="include the t/E[sup∧1] table")
    p.set_defaults(func=cmd_dichotomy)

    p = sub.add_parser("audit", help="bound-shape property battery")
    p.add_argument("--config", required=True)
    p.add_argument("--n-paths", type=int, default=20_000)
    p.add_argument("--steps", type=int, default=1024)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("halfspace", help="half-space / ball layer suite")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_halfspace)

    p = sub.add_parser("supfun", help="E[sup of projection ∧ cap]")
    _add_model_args(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--cap", type=float, default=1.0)
    p.add_argument("--n-paths", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=4096)
    p.set_defaults(func=cmd_supfun)

    p = sub.add_parser("perimeter", help="nonlocal perimeter of a ball")
    _add_model_args(p)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--method", choices=["quadrature", "monte_carlo"],
                   default="quadrature")
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(func=cmd_perimeter)

    p = sub.add_parser("exitprob", help="P_0(exit of B(0,r) by t)")
    _add_model_args(p)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n-paths", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=2048)
    p.set_defaults(func=cmd_exitprob)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
