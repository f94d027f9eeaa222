"""Backend equivalence and distributional checks for the hot kernels.

The compiled and numpy backends must consume identical Philox streams;
outputs may differ only by libm rounding.  Distributional checks use
transform oracles (characteristic and Laplace functions are exact for
the stable laws)."""

import numpy as np
import pytest

from shc import rng
from shc._kernels import (
    backend_name,
    disk_exit,
    fallback,
    interval_exit,
    laws,
    running_sup,
)

HAVE_COMPILED = backend_name() == "compiled"

LAW_CASES_1D = [
    (laws.GAUSS1D, [1.3]),
    (laws.STABLE1D, [1.5, 1.0]),
    (laws.STABLE1D, [1.0, 1.0]),
    (laws.STABLE1D, [0.5, 1.0]),
    (laws.JD1D, [0.7, 1.2, 1.0]),
]
LAW_CASES_2D = [
    (laws.GAUSS2D, [1.0, 0.2, 0.9]),
    (laws.STABLE2D, [1.5, 1.0]),
    (laws.STABLE2D, [1.0, 1.0]),
    (laws.JD2D, [1.0, 0.0, 1.0, 1.5, 1.0]),
]


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled backend unavailable")
class TestBackendEquivalence:
    @pytest.mark.parametrize("law,params", LAW_CASES_1D)
    def test_running_sup(self, law, params):
        args = (law, np.array(params), 77, 4, 5, 400, 259, 2e-4)
        a = running_sup(*args, antithetic=True)
        b = fallback.running_sup(*args, antithetic=True)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-10)

    @pytest.mark.parametrize("law,params", LAW_CASES_2D)
    def test_disk_exit(self, law, params):
        x0 = np.tile([[0.4, -0.2]], (300, 1))
        bridge = law in (laws.GAUSS2D, laws.JD2D)
        args = (law, np.array(params), 13, 6, 0, 300, 192, 5e-5)
        a = disk_exit(*args, x0, (0.0, 0.0), 0.7, False, bridge, True)
        b = fallback.disk_exit(*args, x0, (0.0, 0.0), 0.7, False, bridge, True)
        assert (a == b).mean() > 0.999

    def test_disk_exit_outside_domain(self):
        x0 = np.tile([[1.5, 0.0]], (200, 1))
        args = (laws.STABLE2D, np.array([1.2, 1.0]), 3, 2, 0, 200, 128, 1e-4)
        a = disk_exit(*args, x0, (0.0, 0.0), 1.0, True, False, False)
        b = fallback.disk_exit(*args, x0, (0.0, 0.0), 1.0, True, False, False)
        np.testing.assert_array_equal(a, b)

    def test_interval_exit(self):
        args = (laws.STABLE1D, np.array([1.5, 1.0]), 5, 9, 0, 500, 200, 1e-4)
        ea, sa = interval_exit(*args, 0.3, antithetic=True)
        eb, sb = fallback.interval_exit(*args, 0.3, antithetic=True)
        np.testing.assert_array_equal(ea, eb)
        np.testing.assert_allclose(sa, sb, rtol=0, atol=1e-10)


class TestDeterminism:
    def test_same_seed_same_output(self):
        a = running_sup(laws.STABLE1D, [1.5, 1.0], 42, 1, 0, 200, 128, 1e-3)
        b = running_sup(laws.STABLE1D, [1.5, 1.0], 42, 1, 0, 200, 128, 1e-3)
        np.testing.assert_array_equal(a, b)

    def test_chunk_invariance(self):
        # Generating paths [0, 300) in one call equals [0,100)+[100,300).
        whole = running_sup(laws.GAUSS1D, [1.0], 9, 2, 0, 300, 64, 1e-3)
        first = running_sup(laws.GAUSS1D, [1.0], 9, 2, 0, 100, 64, 1e-3)
        rest = running_sup(laws.GAUSS1D, [1.0], 9, 2, 100, 200, 64, 1e-3)
        np.testing.assert_array_equal(whole, np.vstack([first, rest]))


class TestStableLawOracles:
    def u(self, n):
        return rng.cell_uniforms(1, 1, 0, n, np.array([0]), 0)

    @pytest.mark.parametrize("beta", [0.5, 1.0, 1.3, 1.7])
    def test_cms_characteristic_function(self, beta):
        u = self.u(300_000)
        s = laws.cms_symmetric(beta, u[0], u[1]).ravel()
        for xi in (0.5, 1.0, 2.0):
            emp = np.cos(xi * s).mean()
            assert emp == pytest.approx(np.exp(-abs(xi) ** beta), abs=5e-3)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.6, 0.85])
    def test_kanter_laplace_transform(self, alpha):
        u = self.u(300_000)
        s = laws.kanter_subordinator(alpha, u[0], u[1]).ravel()
        for lam in (0.5, 1.0, 3.0):
            emp = np.exp(-lam * s).mean()
            assert emp == pytest.approx(np.exp(-(lam**alpha)), abs=5e-3)

    def test_isotropic_2d_characteristic_function(self):
        beta = 1.5
        u = self.u(300_000)
        sub = laws.kanter_subordinator(beta / 2, u[0], u[1]).ravel()
        w1, w2 = rng.box_muller(u[2], u[3])
        x1 = np.sqrt(2 * sub) * w1.ravel()
        x2 = np.sqrt(2 * sub) * w2.ravel()
        for xi in [(1.0, 0.0), (0.7, 0.7)]:
            emp = np.cos(xi[0] * x1 + xi[1] * x2).mean()
            exact = np.exp(-np.hypot(*xi) ** beta)
            assert emp == pytest.approx(exact, abs=5e-3)

    def test_cauchy_quartiles(self):
        # standard Cauchy has P(|S| > 1) = 1/2
        u = self.u(400_000)
        s = laws.cms_symmetric(1.0, u[0], u[1]).ravel()
        assert abs((np.abs(s) > 1).mean() - 0.5) < 0.003
        assert abs(np.median(s)) < 0.005


class TestMonitoringRules:
    def test_strides_are_subsets(self):
        sup = running_sup(laws.GAUSS1D, [1.0], 4, 3, 0, 500, 128, 1e-2)
        assert np.all(sup[:, 0] >= sup[:, 1])
        assert np.all(sup[:, 1] >= sup[:, 2])
        assert np.all(sup[:, 0] >= 0)

    def test_exit_steps_ordered_across_strides(self):
        x0 = np.zeros((400, 2))
        ex = disk_exit(
            laws.GAUSS2D, [1.0, 0.0, 1.0], 8, 1, 0, 400, 256, 1e-3,
            x0, (0.0, 0.0), 0.4, False, False, False,
        )
        fine = ex[:, 0]
        for col in (1, 2):
            coarse = ex[:, col]
            both = (fine >= 0) & (coarse >= 0)
            assert np.all(coarse[both] >= fine[both])
            # a coarse exit implies a fine exit
            assert np.all(fine[coarse >= 0] >= 0)

    def test_antithetic_layout(self):
        sup = running_sup(laws.GAUSS1D, [1.0], 4, 3, 7, 100, 64, 1e-2,
                          antithetic=True)
        alone = running_sup(laws.GAUSS1D, [1.0], 4, 3, 7, 100, 64, 1e-2,
                            antithetic=False)
        np.testing.assert_array_equal(sup[0::2], alone)

    def test_interval_exit_symmetric_in_sign(self):
        ex, sup = interval_exit(
            laws.STABLE1D, [1.0, 1.0], 11, 5, 0, 400, 128, 1e-3, 0.2,
            antithetic=True,
        )
        # the interval is symmetric: mirrored paths exit at the same step
        np.testing.assert_array_equal(ex[0::2], ex[1::2])
