import math

import numpy as np
import pytest

from rfqa import fits


def law(t, gamma, p_max):
    return p_max * (1.0 - np.exp(-4.0 * math.pi * gamma * t))


class TestExtractRate:
    def test_exact_curve_recovered(self):
        t = np.linspace(30, 600, 30)
        p = law(t, 2e-4, 0.5)
        fit = fits.extract_rate(t, p, p_max_bound=0.5)
        assert fit.gamma == pytest.approx(2e-4, rel=1e-6)
        assert fit.p_max == pytest.approx(0.5, rel=1e-6)

    def test_fixed_p_max_linear_regime(self):
        # a curve that never leaves the linear regime still identifies the
        # rate when the saturation is pinned
        t = np.linspace(10, 100, 10)
        p = law(t, 1e-6, 0.5)
        fit = fits.extract_rate(t, p, p_max_bound=0.5, fix_p_max=True)
        assert fit.gamma == pytest.approx(1e-6, rel=1e-6)
        assert fit.p_max == 0.5

    def test_noisy_curve_within_errors(self):
        rng = np.random.default_rng(5)
        t = np.linspace(30, 600, 30)
        truth = law(t, 3e-4, 0.5)
        se = np.full_like(t, 0.01)
        p = np.clip(truth + rng.normal(0, 0.01, size=t.size), 0, 1)
        fit = fits.extract_rate(t, p, se, p_max_bound=0.5)
        assert abs(fit.gamma - 3e-4) < 4 * fit.gamma_se

    def test_coherent_static_bound(self):
        t = np.linspace(30, 600, 20)
        p = law(t, 1e-4, 1.0)
        fit = fits.extract_rate(t, p, p_max_bound=1.0)
        assert fit.gamma == pytest.approx(1e-4, rel=1e-5)

    def test_validation(self):
        with pytest.raises(ValueError):
            fits.extract_rate([1.0], [0.1])
        with pytest.raises(ValueError):
            fits.extract_rate([1.0, 2.0], [0.1, 1.5])


class TestFitExponent:
    def test_exact_power_law(self):
        n = np.arange(8, 17)
        p = 2.0 ** (-0.5 * n)
        fit = fits.fit_exponent(n, p)
        assert fit.exponent == pytest.approx(0.5, abs=1e-12)
        assert fit.prefactor_log2 == pytest.approx(0.0, abs=1e-10)

    def test_noisy_within_three_se(self):
        rng = np.random.default_rng(17)
        n = np.arange(8, 17)
        truth = 0.37
        p = 2.0 ** (-truth * n) * (1.0 + rng.normal(0, 0.05, size=n.size))
        se = 0.05 * p
        fit = fits.fit_exponent(n, p, se)
        assert abs(fit.exponent - truth) < 3 * fit.exponent_se

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            fits.fit_exponent([1, 2, 3], [0.5, 0.0, 0.1])

    def test_weighting_prefers_precise_points(self):
        n = np.array([4.0, 5.0, 6.0, 7.0])
        p = 2.0 ** (-0.5 * n)
        p_off = p.copy()
        p_off[0] *= 4.0  # corrupt one point, give it a huge error bar
        se = 1e-6 * p
        se[0] = 10.0 * p_off[0]
        fit = fits.fit_exponent(n, p_off, se)
        assert fit.exponent == pytest.approx(0.5, abs=1e-3)
