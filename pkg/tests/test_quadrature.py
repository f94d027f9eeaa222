import numpy as np
import pytest
from scipy import integrate

from shc.errors import QuadratureError
from shc.quadrature import graded_integral, panelwise_cumulative


@pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 0.9])
def test_power_singularity(p):
    # int_0^1 s^-p ds = 1/(1-p)
    val = graded_integral(lambda s: s**-p, 1.0)
    assert val == pytest.approx(1.0 / (1.0 - p), rel=1e-9)


def test_matches_scipy_on_smooth_integrand():
    f = lambda s: np.exp(-s) * np.sqrt(s)
    val = graded_integral(f, 2.5)
    ref, _ = integrate.quad(f, 0, 2.5)
    assert val == pytest.approx(ref, rel=1e-9)


def test_divergent_integrand_detected():
    with pytest.raises(QuadratureError):
        graded_integral(lambda s: 1.0 / s, 1.0)


def test_strongly_divergent_detected():
    with pytest.raises(QuadratureError):
        graded_integral(lambda s: s**-1.5, 1.0)


def test_diagnostics_attached():
    try:
        graded_integral(lambda s: 1.0 / s, 1.0)
    except QuadratureError as exc:
        assert "panels" in exc.diagnostics
        assert "running_total" in exc.diagnostics


def test_panelwise_cumulative_decreasing_edges():
    edges = np.array([1.0, 0.5, 0.25])
    parts = panelwise_cumulative(lambda s: np.ones_like(s), edges)
    np.testing.assert_allclose(parts, [0.5, 0.25], rtol=1e-14)


def test_rejects_bad_upper_limit():
    with pytest.raises(ValueError):
        graded_integral(lambda s: s, 0.0)
