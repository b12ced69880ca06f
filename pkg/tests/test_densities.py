import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from priorshift import (
    BinormalModel,
    DomainError,
    FunctionPair,
    MixtureModel,
    Sample,
    SamplingError,
    likelihood_ratio,
    mixture_density,
    sample_mixture,
)
from priorshift.densities import sample_labelled
from priorshift.efficiency import integrate

PHI0 = 1.0 / math.sqrt(2.0 * math.pi)

finite_x = st.floats(-30, 30, allow_nan=False)
unit_q = st.floats(0.0, 1.0)


class TestBinormalModel:
    def test_rejects_bad_parameters(self):
        with pytest.raises(DomainError):
            BinormalModel(1.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            BinormalModel(2.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            BinormalModel(0.0, 1.0, 0.0)

    def test_logpdf_matches_scipy(self):
        model = BinormalModel(-0.5, 1.5, 2.0)
        x = np.linspace(-8, 8, 41)
        np.testing.assert_allclose(model.logpdf0(x), stats.norm.logpdf(x, -0.5, 2.0), rtol=1e-13)
        np.testing.assert_allclose(model.logpdf1(x), stats.norm.logpdf(x, 1.5, 2.0), rtol=1e-13)

    def test_log_ratio_closed_form(self):
        model = BinormalModel(-1.0, 3.0, 1.5)
        x = np.linspace(-5, 5, 11)
        expected = ((3.0 + 1.0) * x + (1.0 - 9.0) / 2) / 1.5**2
        np.testing.assert_allclose(model.log_ratio(x), expected, rtol=1e-13, atol=1e-14)

    def test_log_ratio_no_overflow_far_out(self):
        model = BinormalModel(0.0, 2.0, 1.0)
        assert model.pdf0(1e6) == 0.0
        assert model.log_ratio(1e6) == pytest.approx(2e6 - 2.0)

    @pytest.mark.parametrize("q", [0.0, 0.2, 0.5, 1.0])
    def test_mixture_normalised(self, q):
        mix = MixtureModel(BinormalModel(0.0, 2.0, 1.0), q)
        assert integrate(mix.pdf) == pytest.approx(1.0, abs=1e-6)

    def test_check_normalization(self):
        BinormalModel(0.0, 3.0, 0.5).check_normalization()
        bad = FunctionPair(lambda x: stats.norm.logpdf(x), lambda x: stats.norm.logpdf(x) + 0.1)
        with pytest.raises(DomainError):
            bad.check_normalization()


class TestMixtureDensity:
    def test_q0_is_f0(self, binormal02):
        assert mixture_density(MixtureModel(binormal02, 0.0), 0.0) == pytest.approx(PHI0, rel=1e-14)

    def test_q1_is_f1(self, binormal02):
        assert mixture_density(MixtureModel(binormal02, 1.0), 2.0) == pytest.approx(PHI0, rel=1e-14)

    def test_symmetric_point(self, binormal02):
        # 0.8 phi(1) + 0.2 phi(-1) = phi(1)
        phi1 = PHI0 * math.exp(-0.5)
        value = mixture_density(MixtureModel(binormal02, 0.2), 1.0)
        assert value == pytest.approx(phi1, rel=1e-14)
        assert round(value, 6) == 0.241971

    def test_rejects_non_finite(self, binormal02):
        with pytest.raises(DomainError):
            mixture_density(MixtureModel(binormal02, 0.2), math.inf)
        with pytest.raises(DomainError):
            mixture_density(MixtureModel(binormal02, 0.2), [0.0, math.nan])

    def test_prevalence_range(self, binormal02):
        with pytest.raises(DomainError):
            MixtureModel(binormal02, 1.5)

    @given(x=finite_x, q=unit_q)
    def test_between_components(self, x, q):
        pair = BinormalModel(0.0, 2.0, 1.0)
        f0, f1 = pair.pdf0(x), pair.pdf1(x)
        value = mixture_density(MixtureModel(pair, q), x)
        assert min(f0, f1) * (1 - 1e-12) <= value <= max(f0, f1) * (1 + 1e-12)

    @given(x=st.floats(-8, 8), q=unit_q)
    def test_affine_in_q(self, x, q):
        pair = BinormalModel(0.0, 2.0, 1.0)
        f0, f1 = pair.pdf0(x), pair.pdf1(x)
        value = mixture_density(MixtureModel(pair, q), x)
        assert value == pytest.approx(f0 + q * (f1 - f0), rel=1e-12, abs=1e-300)


class TestLikelihoodRatio:
    @pytest.mark.parametrize("x, expected", [
        (1.0, 1.0),
        (0.0, math.exp(-2.0)),
        (2.0, math.exp(2.0)),
    ])
    def test_values(self, binormal02, x, expected):
        assert likelihood_ratio(binormal02, x) == pytest.approx(expected, rel=1e-14)

    def test_rounded(self, binormal02):
        assert round(likelihood_ratio(binormal02, 0.0), 6) == 0.135335
        assert round(likelihood_ratio(binormal02, 2.0), 6) == 7.389056

    @given(a=finite_x, b=finite_x,
           mu1=st.floats(0.05, 5.0), sigma=st.floats(0.2, 3.0))
    def test_strictly_increasing(self, a, b, mu1, sigma):
        model = BinormalModel(0.0, mu1, sigma)
        lo, hi = min(a, b), max(a, b)
        if hi - lo < 1e-9 * (1.0 + abs(lo)):
            return  # below float resolution of the log-ratio
        assert model.log_ratio(lo) < model.log_ratio(hi)


class TestSample:
    def test_validation(self):
        with pytest.raises(DomainError):
            Sample([])
        with pytest.raises(DomainError):
            Sample([1.0, math.inf])

    def test_immutable(self):
        s = Sample([1.0, 2.0])
        assert s.n == 2 and len(s) == 2
        with pytest.raises(ValueError):
            s.values[0] = 3.0
        np.testing.assert_array_equal(np.asarray(s), [1.0, 2.0])


class TestSampling:
    @pytest.mark.parametrize("seed", [0, 1, 123])
    def test_degenerate_mixtures(self, binormal02, seed):
        x0, y0 = sample_labelled(MixtureModel(binormal02, 0.0), 5, seed)
        x1, y1 = sample_labelled(MixtureModel(binormal02, 1.0), 5, seed)
        assert not y0.any() and y1.all()
        # same stream, labels do not consume different randomness: N(2,1) = N(0,1) + 2
        np.testing.assert_allclose(x1, x0 + 2.0)

    def test_mean_matches_prevalence(self, binormal02):
        n = 100_000
        sample = sample_mixture(MixtureModel(binormal02, 0.2), n, 42)
        # var of X under the mixture: 1 + q(1-q) * 4
        se = math.sqrt((1.0 + 0.16 * 4.0) / n)
        assert abs(sample.values.mean() - 0.4) < 3 * se

    def test_deterministic(self, binormal02):
        mix = MixtureModel(binormal02, 0.3)
        a = sample_mixture(mix, 50, 9).values
        b = sample_mixture(mix, 50, 9).values
        assert a.tobytes() == b.tobytes()
        assert sample_mixture(mix, 50, 10).values.tobytes() != a.tobytes()

    def test_unsupported_family(self):
        pair = FunctionPair(stats.norm.logpdf, lambda x: stats.norm.logpdf(x, 1.0))
        with pytest.raises(SamplingError):
            sample_mixture(MixtureModel(pair, 0.5), 10, 0)

    def test_function_pair_sampler(self):
        pair = FunctionPair(
            stats.norm.logpdf, lambda x: stats.norm.logpdf(x, 1.0),
            sample0=lambda rng, k: rng.standard_normal(k),
            sample1=lambda rng, k: 1.0 + rng.standard_normal(k),
        )
        assert sample_mixture(MixtureModel(pair, 0.5), 10, 0).n == 10

    def test_n_must_be_positive(self, binormal02):
        with pytest.raises(DomainError):
            sample_mixture(MixtureModel(binormal02, 0.5), 0, 0)
