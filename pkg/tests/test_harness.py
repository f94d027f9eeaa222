import json
import math

import numpy as np
import pytest

from shc import harness
from shc.harness import DichotomyRow, ExperimentConfig, _fit_limit


def brownian_config(**over):
    base = dict(
        model={"preset": "brownian", "sigma2": 1.0},
        domain={"preset": "ball", "center": [0.0, 0.0], "radius": 1.0},
        t_grid=[1e-2, 1e-3, 1e-4],
        n_paths=4000,
        steps=[256, 512, 1024],
        strategy="boundary_layer",
        seed=7,
    )
    base.update(over)
    return ExperimentConfig(**base)


class TestConfig:
    def test_t_grid_must_decrease(self):
        with pytest.raises(ValueError):
            brownian_config(t_grid=[1e-3, 1e-2])
        with pytest.raises(ValueError):
            brownian_config(t_grid=[1e-2, -1e-3])

    def test_minimum_paths(self):
        with pytest.raises(ValueError):
            brownian_config(n_paths=50)

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValueError):
            ExperimentConfig.from_dict({"model": {}, "domain": {},
                                        "t_grid": [1.0], "bogus": 1})

    def test_per_t_lists(self):
        cfg = brownian_config(n_paths=[4000, 5000, 6000])
        assert cfg.n_paths_per_t == [4000, 5000, 6000]
        with pytest.raises(ValueError):
            brownian_config(steps=[256, 512])

    def test_strategy_names(self):
        with pytest.raises(ValueError):
            brownian_config(strategy="magic")

    def test_hash_stable_and_sensitive(self):
        a = brownian_config()
        b = brownian_config()
        assert a.config_hash() == b.config_hash()
        c = brownian_config(seed=8)
        assert a.config_hash() != c.config_hash()

    def test_default_tolerance_rule(self):
        cfg = brownian_config()
        m, _ = cfg.build()
        assert cfg.default_tolerance(m) == 0.10
        cauchy = brownian_config(model={"preset": "cauchy"})
        m2, _ = cauchy.build()
        assert cauchy.default_tolerance(m2) == 0.15
        fixed = brownian_config(tolerance=0.77)
        assert fixed.default_tolerance(m) == 0.77

    def test_json_round_trip(self, tmp_path):
        cfg = brownian_config()
        p = tmp_path / "cfg.json"
        p.write_text(json.dumps({
            "model": cfg.model, "domain": cfg.domain, "t_grid": cfg.t_grid,
            "n_paths": cfg.n_paths, "steps": cfg.steps,
            "strategy": cfg.strategy, "seed": cfg.seed,
        }))
        loaded = ExperimentConfig.from_json_file(str(p))
        assert loaded.config_hash() == cfg.config_hash()


class TestRowAlgebra:
    def test_error_propagation(self):
        row = DichotomyRow(t=1e-3, deficit=2.0, deficit_se=0.1,
                           denom=4.0, denom_se=0.4)
        assert row.ratio == pytest.approx(0.5)
        expected = 0.5 * math.hypot(0.1 / 2.0, 0.4 / 4.0)
        assert row.band == pytest.approx(expected, rel=1e-12)


class TestFitLimit:
    def test_recovers_synthetic_power_law(self):
        ts = [1e-1, 1e-2, 1e-3]
        ratios = [1.0 + 0.5 * t**0.4 for t in ts]
        limit, theta, method = _fit_limit(ts, ratios)
        assert method == "three-point"
        assert theta == pytest.approx(0.4, abs=1e-6)
        assert limit == pytest.approx(1.0, abs=1e-9)

    def test_non_monotone_falls_back(self):
        limit, theta, method = _fit_limit([1e-1, 1e-2, 1e-3],
                                          [1.02, 0.98, 1.01])
        assert method == "last-point" and limit == 1.01

    def test_theta_clamped(self):
        ts = [1e-1, 1e-2, 1e-3]
        ratios = [1.0 + 0.5 * t**2.0 for t in ts]  # theta above the cap
        _, theta, method = _fit_limit(ts, ratios)
        assert method == "theta-clamped" and theta in (0.1, 1.0)


class TestDichotomyRun:
    @pytest.fixture(scope="class")
    def report(self):
        return harness.run_dichotomy(brownian_config())

    def test_branch_selection(self, report):
        assert report.variation == "unbounded"
        assert report.branch == "sup_functional"
        assert report.perimeter is None

    def test_rows_ordered_and_ratios_near_one(self, report):
        ts = [r.t for r in report.rows]
        assert ts == sorted(ts, reverse=True)
        for r in report.rows:
            assert abs(r.ratio - 1.0) < 0.25

    def test_deterministic_report_json(self, report):
        again = harness.run_dichotomy(brownian_config())
        assert report.to_json() == again.to_json()

    def test_csv_columns(self, report):
        lines = report.to_csv().strip().splitlines()
        assert lines[0] == ("t,deficit,deficit_se,denom,denom_se,"
                            "ratio,ratio_lo,ratio_hi")
        assert len(lines) == 1 + len(report.rows)

    def test_seed_changes_numbers(self):
        a = harness.run_dichotomy(brownian_config())
        b = harness.run_dichotomy(brownian_config(seed=8))
        assert a.rows[0].deficit != b.rows[0].deficit


class TestBoundedVariationBranch:
    @pytest.fixture(scope="class")
    def report(self):
        cfg = brownian_config(
            model={"preset": "stable", "beta": 0.5},
            t_grid=[3e-3, 1e-3],
            n_paths=[60_000, 120_000],
            steps=[256, 512],
            strategy="uniform",
        )
        return harness.run_dichotomy(cfg)

    def test_branch_exclusivity(self, report):
        assert report.variation == "bounded"
        assert report.branch == "t_perimeter"
        assert report.perimeter is not None and report.perimeter["value"] > 0

    def test_ratio_reasonable(self, report):
        row = report.rows[-1]
        assert abs(row.ratio - 1.0) <= max(0.15, 3 * row.band)


class TestNegligibility:
    def test_brownian_passes(self):
        cfg = brownian_config(n_paths=8000)
        table = harness.run_t_negligibility(cfg)
        assert table["status"] == "pass"
        assert table["values"][0] > table["values"][-1]

    def test_bounded_variation_refused(self):
        cfg = brownian_config(model={"preset": "stable", "beta": 0.5})
        with pytest.raises(ValueError):
            harness.run_t_negligibility(cfg)


class TestHalfspaceSuite:
    def test_brownian_small(self):
        cfg = brownian_config(t_grid=[1e-3, 1e-4], n_paths=8000,
                              steps=[512, 1024])
        rep = harness.run_halfspace_suite(cfg)
        assert rep.ordering_exact
        last = rep.rows[-1]
        for key in ("ratio_inner", "ratio_half", "ratio_outer"):
            assert abs(last[key] - 1.0) < 0.2
        # identity between the capped sup and the half-space layer integral
        assert last["half"] == pytest.approx(last["halfspace_identity"],
                                             rel=0.15)

    def test_requires_branch_one(self):
        cfg = brownian_config(model={"preset": "stable", "beta": 0.5})
        with pytest.raises(ValueError):
            harness.run_halfspace_suite(cfg)


class TestAuditStructure:
    @pytest.fixture(scope="class")
    def report(self):
        cfg = brownian_config(model={"preset": "stable", "beta": 1.5},
                              t_grid=[1e-3], steps=256)
        return harness.run_bound_audit(cfg, n_paths=6000, steps=256)

    def test_check_names(self, report):
        names = {c.name for c in report.checks}
        assert {"tail_sandwich", "exit_upper_phi", "exit_lower_psi",
                "exit_upper_projected", "reflection_inequality",
                "expected_exit_time"} <= names

    def test_tail_sandwich_deterministic_pass(self, report):
        tail = next(c for c in report.checks if c.name == "tail_sandwich")
        assert tail.status == "pass"

    def test_no_failures_at_smoke_budget(self, report):
        assert report.status in ("pass", "inconclusive")

    def test_gaussian_lower_only_for_diffusive(self, report):
        assert all(c.name != "gaussian_lower" for c in report.checks)
        cfg = brownian_config(t_grid=[1e-3], steps=256)
        rep2 = harness.run_bound_audit(cfg, n_paths=6000, steps=256)
        assert any(c.name == "gaussian_lower" for c in rep2.checks)
