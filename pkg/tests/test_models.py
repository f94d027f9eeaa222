import math

import numpy as np
import pytest
from scipy import stats

from shc import presets, rng
from shc._kernels import laws
from shc.errors import InvalidCutoffError, InvalidModelError
from shc.geometry import Ball
from shc.models import (
    ExactStableJumps,
    LevyModel,
    Path,
    PathGrid,
    batch_ball_exit,
    batch_running_sup,
    default_cutoff,
    first_exit,
    project_running_sup,
    sample_increment,
    sample_path,
    sample_stable_increment,
    _density_gen,
    _radius_sampler,
)


def brownian(d=2, sigma2=1.0):
    return LevyModel(dimension=d, diffusion=sigma2 * np.eye(d), name="brownian")


def stable(beta, d=2):
    return LevyModel(dimension=d, jumps=ExactStableJumps(beta), name="stable")


class TestModelValidation:
    def test_dimension_floor(self):
        with pytest.raises(InvalidModelError):
            LevyModel(dimension=1, diffusion=np.eye(1))

    def test_needs_some_component(self):
        with pytest.raises(InvalidModelError):
            LevyModel(dimension=2)

    def test_degenerate_diffusion_rejected(self):
        bad = np.diag([1.0, 0.0])
        with pytest.raises(InvalidModelError):
            LevyModel(dimension=2, diffusion=bad)

    def test_asymmetric_diffusion_rejected(self):
        with pytest.raises(InvalidModelError):
            LevyModel(dimension=2, diffusion=np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_zero_matrix_means_no_diffusion(self):
        m = LevyModel(dimension=2, diffusion=np.zeros((2, 2)),
                      jumps=ExactStableJumps(1.5))
        assert not m.has_diffusion

    def test_stable_index_range(self):
        with pytest.raises(InvalidModelError):
            ExactStableJumps(2.0)
        with pytest.raises(InvalidModelError):
            ExactStableJumps(0.0)

    def test_anisotropic_reserved(self):
        with pytest.raises(InvalidModelError):
            LevyModel(dimension=2, diffusion=np.eye(2), isotropic=False)


class TestPathGrid:
    def test_invariants(self):
        g = PathGrid(horizon=1.0, steps=8, cutoff=0.1)
        assert g.dt == pytest.approx(0.125)
        with pytest.raises(ValueError):
            PathGrid(horizon=0.0, steps=8)
        with pytest.raises(ValueError):
            PathGrid(horizon=1.0, steps=0)
        with pytest.raises(InvalidCutoffError):
            PathGrid(horizon=1.0, steps=8, cutoff=-1.0)

    def test_cutoff_beyond_support_rejected(self):
        from shc.models import resolve_cutoff

        m = presets.make_model("truncated_stable", beta=1.5, R0=1.0)
        with pytest.raises(InvalidCutoffError):
            resolve_cutoff(m, PathGrid(horizon=1e-3, steps=8, cutoff=2.0))

    def test_default_cutoff_scale(self):
        m = stable(1.5)
        # phi(r) = r^1.5/4, so phi^-1(t)/10 = (4t)^(2/3)/10
        eps = default_cutoff(m, 1e-4)
        assert eps == pytest.approx((4e-4) ** (2 / 3) / 10, rel=1e-3)
        # capped by R0/100 for large t
        assert default_cutoff(m, 10.0) == pytest.approx(0.01)


class TestStableIncrement:
    def test_rejects_bad_index(self):
        g = np.random.default_rng(0)
        with pytest.raises(ValueError):
            sample_stable_increment(2.0, 1.0, g)
        with pytest.raises(ValueError):
            sample_stable_increment(1.0, 0.0, g)

    def test_cauchy_median_and_quartiles(self):
        # the underlying variate generator; the scalar op delegates to it
        u = rng.cell_uniforms(2, 1, 0, 1_000_000, np.array([0]), 0)
        s = laws.cms_symmetric(1.0, u[0], u[1]).ravel()
        assert abs(np.median(s)) < 0.01
        assert abs((np.abs(s) > 1).mean() - 0.5) < 0.005

    def test_scalar_op_matches_law(self):
        g = np.random.default_rng(42)
        draws = np.array([sample_stable_increment(1.5, 1.0, g)
                          for _ in range(4000)])
        u = rng.cell_uniforms(3, 1, 0, 4000, np.array([0]), 0)
        ref = laws.cms_symmetric(1.5, u[0], u[1]).ravel()
        ks = stats.ks_2samp(draws, ref)
        assert ks.statistic < 0.05

    def test_scaling_in_dt(self):
        # samples at dt=2 vs 2^(1/1.5) * samples at dt=1
        u = rng.cell_uniforms(4, 1, 0, 100_000, np.array([0]), 0)
        u2 = rng.cell_uniforms(4, 2, 0, 100_000, np.array([0]), 0)
        s_dt2 = 2.0 ** (1 / 1.5) * laws.cms_symmetric(1.5, u[0], u[1]).ravel()
        s_scaled = 2.0 ** (1 / 1.5) * laws.cms_symmetric(1.5, u2[0], u2[1]).ravel()
        ks = stats.ks_2samp(s_dt2, s_scaled)
        assert ks.statistic < 0.01


class TestSampleIncrement:
    def test_brownian_covariance(self):
        m = brownian()
        g = np.random.default_rng(1)
        grid = PathGrid(horizon=1.0, steps=1)
        draws = np.array([sample_increment(m, 0.01, grid, g)
                          for _ in range(20_000)])
        cov = np.cov(draws.T)
        assert np.allclose(np.diag(cov), 0.01, rtol=0.05)
        assert abs(cov[0, 1]) < 0.05 * 0.01

    def test_density_sampler_matches_exact_stable(self):
        beta = 1.5
        exact = stable(beta)
        den = exact.jump_density
        prof = exact.profile
        from shc.models import RadialDensityJumps

        approx = LevyModel(
            dimension=2,
            jumps=RadialDensityJumps(den, prof,
                                     *(2 * [presets.stable_levy_constant(2, beta)])),
            name="stable-by-density",
        )
        dt = 0.01
        gen = _density_gen(approx, 1e-4, dt, 11, 3, 0, 50_000)
        inc_density = gen(0, 1)[:, 0, :]
        u = rng.cell_uniforms(12, 1, 0, 50_000, np.array([0]), 0)
        sub = laws.kanter_subordinator(beta / 2, u[0], u[1]).ravel()
        w1, w2 = rng.box_muller(u[2], u[3])
        fac = dt ** (1 / beta) * np.sqrt(2 * sub)
        inc_exact = np.stack([fac * w1.ravel(), fac * w2.ravel()], axis=1)
        ks = stats.ks_2samp(
            np.linalg.norm(inc_density, axis=1),
            np.linalg.norm(inc_exact, axis=1),
        )
        assert ks.statistic < 0.02

    def test_truncated_radii_respect_support(self):
        m = presets.make_model("truncated_stable", beta=1.5, R0=1.0)
        sampler = _radius_sampler(m, 1e-3)
        u = np.random.default_rng(3).random(1_000_000)
        radii = sampler.sample(1.0 - u)
        assert radii.max() <= 1.0 + 1e-12
        assert radii.min() >= 1e-3 - 1e-15

    def test_symmetry_of_increments(self):
        m = presets.make_model("radial_density", formula="stable-log",
                               beta_log=-0.5)
        gen = _density_gen(m, 1e-3, 1e-3, 5, 7, 0, 100_000, nu=[1.0, 0.0])
        inc = gen(0, 1).ravel()
        ks = stats.ks_2samp(inc, -inc)
        assert ks.statistic < 0.01


class TestSamplePath:
    def test_single_step_reduces_to_increment(self):
        m = brownian()
        grid = PathGrid(horizon=0.5, steps=1)
        p = sample_path(m, [0.3, -0.2], grid, np.random.default_rng(7))
        inc = sample_increment(m, 0.5, grid, np.random.default_rng(7))
        np.testing.assert_allclose(p.positions[1], [0.3, -0.2] + inc)

    def test_brownian_variance(self):
        m = brownian()
        grid = PathGrid(horizon=0.25, steps=16)
        ends = np.array([
            sample_path(m, [0.0, 0.0], grid, np.random.default_rng(k)).positions[-1]
            for k in range(4000)
        ])
        # per-coordinate variance t * tr(A)/d = 0.25
        assert np.allclose(ends.var(axis=0), 0.25, rtol=0.05)

    def test_deterministic_given_seed(self):
        m = stable(1.2)
        grid = PathGrid(horizon=0.1, steps=8)
        p1 = sample_path(m, [0.0, 0.0], grid, np.random.default_rng(5))
        p2 = sample_path(m, [0.0, 0.0], grid, np.random.default_rng(5))
        np.testing.assert_array_equal(p1.positions, p2.positions)


class TestProjectRunningSup:
    @staticmethod
    def path_from_proj(values):
        pos = np.zeros((len(values) + 1, 2))
        pos[1:, 0] = values
        return Path(positions=pos, grid=PathGrid(horizon=1.0, steps=len(values)))

    def test_constant_path(self):
        p = self.path_from_proj([0.0, 0.0, 0.0])
        np.testing.assert_array_equal(project_running_sup(p, [1, 0]), [0, 0, 0])

    def test_staircase(self):
        p = self.path_from_proj([1.0, 0.5, 2.0])
        np.testing.assert_array_equal(project_running_sup(p, [1, 0]), [1, 1, 2])

    def test_monotone_and_refinement_invariant(self):
        p = self.path_from_proj([0.4, -0.3, 0.9, 0.1])
        sup = project_running_sup(p, [1, 0])
        assert np.all(np.diff(sup) >= 0)
        refined = self.path_from_proj([0.4, 0.2, -0.3, -0.1, 0.9, 0.3, 0.1, 0.05])
        sup_r = project_running_sup(refined, [1, 0])
        assert sup_r[-1] == sup[-1]

    def test_requires_unit_vector(self):
        p = self.path_from_proj([1.0])
        with pytest.raises(ValueError):
            project_running_sup(p, [2.0, 0.0])


class TestFirstExit:
    def test_interior_path(self):
        pos = np.zeros((5, 2))
        p = Path(positions=pos, grid=PathGrid(horizon=1.0, steps=4))
        rec = first_exit(p, Ball([0.0, 0.0], 1.0))
        assert not rec.exited and rec.exit_step is None

    def test_deterministic_crossing(self):
        pos = np.array([[0, 0], [0.5, 0], [0.9, 0], [1.5, 0], [0.2, 0]], float)
        p = Path(positions=pos, grid=PathGrid(horizon=1.0, steps=4))
        rec = first_exit(p, Ball([0.0, 0.0], 1.0))
        assert rec.exited and rec.exit_step == 3
        assert rec.exit_time_estimate == pytest.approx(0.75)

    def test_requires_interior_start(self):
        pos = np.array([[2.0, 0.0], [0.0, 0.0]])
        p = Path(positions=pos, grid=PathGrid(horizon=1.0, steps=1))
        with pytest.raises(ValueError):
            first_exit(p, Ball([0.0, 0.0], 1.0))


class TestBatchEngines:
    def test_exact_vs_scaled_horizon(self):
        # sup at horizon t vs t^(1/beta) * sup at horizon 1 (stable scaling)
        m = stable(1.5)
        s_t = batch_running_sup(m, [1, 0], 0.25, 256, 30_000, 3, 8)[:, 0]
        s_1 = batch_running_sup(m, [1, 0], 1.0, 256, 30_000, 3, 9)[:, 0]
        ks = stats.ks_2samp(s_t, 0.25 ** (1 / 1.5) * s_1)
        assert ks.statistic < 0.012

    def test_grid_refinement_self_consistency(self):
        m = brownian()
        from shc.estimators import exit_probability_ball

        coarse = exit_probability_ball(m, 0.5, 0.02, 20_000, steps=512, seed=4)
        fine = exit_probability_ball(m, 0.5, 0.02, 20_000, steps=4096, seed=5)
        gap = abs(coarse.value - fine.value)
        assert gap <= 2.5 * math.hypot(coarse.stderr, fine.stderr)

    def test_ball_exit_antithetic_pairs_share_start(self):
        m = stable(1.0)
        x0 = np.random.default_rng(0).normal(size=(100, 2)) * 0.1
        ex = batch_ball_exit(m, x0, [0, 0], 1.0, 1e-3, 64, 1, 2,
                             antithetic=True)
        assert ex.shape == (200, 3)

    def test_cutoff_consistency_density_model(self):
        m = presets.make_model("truncated_stable", beta=1.5, R0=1.0)
        from shc.estimators import sup_functional

        e1 = sup_functional(m, [1, 0], 1e-3, 1.0, 8000, steps=256, seed=2,
                            cutoff=2e-3, stream=41)
        e2 = sup_functional(m, [1, 0], 1e-3, 1.0, 8000, steps=256, seed=2,
                            cutoff=1e-3, stream=42)
        assert abs(e1.value - e2.value) <= 3 * math.hypot(e1.stderr, e2.stderr)
