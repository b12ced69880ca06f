import numpy as np
import pytest

from priorshift import BinormalModel, MixtureModel, sample_mixture

SUITE_SEED = 20240601


def random_mle_suite(count=200, seed=SUITE_SEED):
    """(model, true_q, sample) triples: mu1 in [0.25, 4], q in [0.05, 0.95], n in [2, 500]."""
    rng = np.random.default_rng(seed)
    suite = []
    for _ in range(count):
        mu1 = rng.uniform(0.25, 4.0)
        q = rng.uniform(0.05, 0.95)
        n = int(rng.integers(2, 501))
        model = BinormalModel(0.0, mu1, 1.0)
        suite.append((model, q, sample_mixture(MixtureModel(model, q), n, rng)))
    return suite


def random_efficiency_configs(count=50, seed=SUITE_SEED + 1):
    """(model, q) pairs with mu1 in [0.1, 5] and q in [0.05, 0.95]."""
    rng = np.random.default_rng(seed)
    return [(BinormalModel(0.0, rng.uniform(0.1, 5.0), 1.0), rng.uniform(0.05, 0.95))
            for _ in range(count)]


@pytest.fixture
def binormal02():
    return BinormalModel(0.0, 2.0, 1.0)
