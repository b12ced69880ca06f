import math

import numpy as np
import pytest

from priorshift import QuadratureError, QuadratureSettings, DomainError
from priorshift.efficiency import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, integrate


def test_gauss_part_matches_legendre():
    x, w = np.polynomial.legendre.leggauss(7)
    np.testing.assert_allclose(NODES[1::2], x, atol=1e-15)
    np.testing.assert_allclose(GAUSS_WEIGHTS[1::2], w, atol=1e-15)


@pytest.mark.parametrize("degree", range(0, 23))
def test_kronrod_exact_for_polynomials(degree):
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert KRONROD_WEIGHTS @ NODES**degree == pytest.approx(exact, abs=1e-14)


def test_settings_validation():
    with pytest.raises(DomainError):
        QuadratureSettings(abs_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSettings(max_subdivisions=0)


class TestIntegrate:
    def test_normal_pdf(self):
        val = integrate(lambda x: np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi))
        assert val == pytest.approx(1.0, abs=1e-10)

    def test_normal_second_moment(self):
        val = integrate(lambda x: x * x * np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi))
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_half_lines(self):
        assert integrate(lambda x: np.exp(-x), (0.0, math.inf)) == pytest.approx(1.0, abs=1e-10)
        assert integrate(lambda x: np.exp(x), (-math.inf, 0.0)) == pytest.approx(1.0, abs=1e-10)
        assert integrate(lambda x: np.exp(-(x - 3.0)), (3.0, math.inf)) == pytest.approx(1.0, abs=1e-10)

    def test_finite_interval(self):
        assert integrate(np.sin, (0.0, math.pi)) == pytest.approx(2.0, abs=1e-12)

    def test_cauchy_tails(self):
        # slowly decaying tails exercise the infinite-domain map
        assert integrate(lambda x: 1.0 / (math.pi * (1.0 + x * x))) == pytest.approx(1.0, abs=1e-8)

    def test_far_offset_peak(self):
        val = integrate(lambda x: np.exp(-0.5 * (x - 25.0) ** 2) / math.sqrt(2 * math.pi))
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_underflowing_tails_are_zero_not_nan(self):
        def f(x):
            with np.errstate(invalid="ignore", over="ignore"):
                # 0 * inf in the far tail
                return np.exp(-x * x) * np.exp(x * x / 2)
        assert math.isfinite(integrate(f))

    def test_budget_exhaustion(self):
        settings = QuadratureSettings(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=3)
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: 1.0 / np.sqrt(x), (0.0, 1.0), settings)
        assert info.value.estimate == pytest.approx(2.0, rel=0.05)
        assert info.value.error > 0

    def test_empty_domain(self):
        with pytest.raises(DomainError):
            integrate(np.sin, (1.0, 1.0))
