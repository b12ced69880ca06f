"""Class-conditional densities, two-component mixtures and mixture sampling.

A :class:`DensityPair` is the known training model: evaluable (log-)densities
``f0`` and ``f1`` of the feature given the class label. Under prior probability
shift the test feature density is the mixture

    f_q(x) = (1 - q) * f0(x) + q * f1(x),

with ``q`` the (unknown) positive class prevalence on the test set.

All random draws go through :func:`numpy.random.default_rng`, i.e. the PCG64
bit generator, and normal variates come from numpy's ziggurat sampler. A seed
therefore pins the output exactly across runs and platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, SamplingError

__all__ = [
    "DensityPair",
    "FunctionPair",
    "BinormalModel",
    "MixtureModel",
    "Sample",
    "as_sample",
    "mixture_density",
    "likelihood_ratio",
    "sample_mixture",
    "sample_labelled",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def _as_finite_array(x: ArrayLike) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("feature values must be finite")
    return arr


def _scalar_or_array(arr: np.ndarray):
    return float(arr) if arr.ndim == 0 else arr


class DensityPair:
    """Interface for the pair of class-conditional densities ``(f0, f1)``.

    Subclasses implement :meth:`logpdf0` and :meth:`logpdf1` (vectorised over
    numpy arrays). :meth:`log_ratio` may be overridden with a closed form, and
    :meth:`rvs` if the family supports sampling.
    """

    #: Interval carrying all the mass; used by the quadrature engine.
    support: tuple[float, float] = (-math.inf, math.inf)

    def logpdf0(self, x):
        raise NotImplementedError

    def logpdf1(self, x):
        raise NotImplementedError

    def pdf0(self, x):
        return np.exp(self.logpdf0(x))

    def pdf1(self, x):
        return np.exp(self.logpdf1(x))

    def log_ratio(self, x):
        """``log f1(x) - log f0(x)``."""
        return self.logpdf1(x) - self.logpdf0(x)

    def rvs(self, label: int, size: int, rng: np.random.Generator) -> np.ndarray:
        raise SamplingError(f"{type(self).__name__} does not support sampling")

    def check_normalization(self, tol: float = 1e-6) -> None:
        """Raise :class:`DomainError` unless both densities integrate to 1."""
        from .efficiency import integrate

        for label, logpdf in ((0, self.logpdf0), (1, self.logpdf1)):
            mass = integrate(lambda x: np.exp(logpdf(x)), self.support)
            if abs(mass - 1.0) > tol:
                raise DomainError(f"f{label} integrates to {mass!r}, not 1")


@dataclass(frozen=True)
class FunctionPair(DensityPair):
    """A density pair given by two vectorised log-density callables.

    Optional ``sample0`` / ``sample1`` callables ``(rng, size) -> ndarray``
    enable :func:`sample_mixture`.
    """

    log_f0: Callable[[np.ndarray], np.ndarray]
    log_f1: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float] = (-math.inf, math.inf)
    sample0: Callable | None = field(default=None, compare=False)
    sample1: Callable | None = field(default=None, compare=False)

    def logpdf0(self, x):
        return self.log_f0(np.asarray(x, dtype=float))

    def logpdf1(self, x):
        return self.log_f1(np.asarray(x, dtype=float))

    def rvs(self, label, size, rng):
        sampler = self.sample1 if label else self.sample0
        if sampler is None:
            raise SamplingError(f"no sampler supplied for class {label}")
        return np.asarray(sampler(rng, size), dtype=float)


@dataclass(frozen=True)
class BinormalModel(DensityPair):
    """Equal-variance binormal model ``X | Y=i ~ N(mu_i, sigma**2)``."""

    mu0: float = 0.0
    mu1: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mu0) and math.isfinite(self.mu1)):
            raise DomainError("means must be finite")
        if not self.mu1 > self.mu0:
            raise DomainError(f"need mu1 > mu0, got mu0={self.mu0}, mu1={self.mu1}")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    def _logpdf(self, x, mu):
        z = (np.asarray(x, dtype=float) - mu) / self.sigma
        return -0.5 * z * z - _LOG_SQRT_2PI - math.log(self.sigma)

    def logpdf0(self, x):
        return self._logpdf(x, self.mu0)

    def logpdf1(self, x):
        return self._logpdf(x, self.mu1)

    def log_ratio(self, x):
        # linear in x, so no quotient of tiny densities is ever formed
        x = np.asarray(x, dtype=float)
        midpoint = 0.5 * (self.mu0 + self.mu1)
        return (self.mu1 - self.mu0) * (x - midpoint) / self.sigma**2

    def rvs(self, label, size, rng):
        mu = self.mu1 if label else self.mu0
        return mu + self.sigma * rng.standard_normal(size)


@dataclass(frozen=True)
class MixtureModel:
    """A density pair together with the test-set positive prevalence ``q``."""

    densities: DensityPair
    q: float

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise DomainError(f"prevalence must lie in [0, 1], got {self.q}")

    def logpdf(self, x):
        """Log of the mixture density, evaluated without underflow."""
        x = np.asarray(x, dtype=float)
        l0 = self.densities.logpdf0(x)
        l1 = self.densities.logpdf1(x)
        if self.q == 0.0:
            return l0
        if self.q == 1.0:
            return l1
        return np.logaddexp(math.log1p(-self.q) + l0, math.log(self.q) + l1)

    def pdf(self, x):
        return np.exp(self.logpdf(x))


@dataclass(frozen=True, eq=False)
class Sample:
    """Test-set feature values ``z_1, ..., z_n`` (at least one, all finite)."""

    values: np.ndarray

    def __post_init__(self):
        values = _as_finite_array(self.values).ravel()
        if values.size == 0:
            raise DomainError("a sample needs at least one value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def as_sample(sample: Sample | ArrayLike) -> Sample:
    return sample if isinstance(sample, Sample) else Sample(sample)


def mixture_density(model: MixtureModel, x: ArrayLike):
    """Evaluate ``(1 - q) f0(x) + q f1(x)``.

    Examples:
        >>> m = MixtureModel(BinormalModel(0.0, 2.0, 1.0), q=0.2)
        >>> round(mixture_density(m, 1.0), 6)
        0.241971
    """
    x = _as_finite_array(x)
    return _scalar_or_array(model.pdf(x))


def likelihood_ratio(pair: DensityPair, x: ArrayLike):
    """Return ``f1(x) / f0(x)``, computed as the exponential of the log-ratio."""
    x = _as_finite_array(x)
    with np.errstate(over="ignore"):
        return _scalar_or_array(np.exp(pair.log_ratio(x)))


def sample_labelled(model: MixtureModel, n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``n`` i.i.d. labelled pairs ``(x, y)`` from the mixture.

    Each label is Bernoulli(q); the feature is then drawn from the matching
    class-conditional density. ``seed`` is anything accepted by
    :func:`numpy.random.default_rng` (int, SeedSequence or Generator).
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    labels = (rng.random(n) < model.q).astype(np.int8)
    x = np.empty(n)
    for label in (0, 1):
        mask = labels == label
        count = int(mask.sum())
        if count:
            x[mask] = model.densities.rvs(label, count, rng)
    return x, labels


def sample_mixture(model: MixtureModel, n: int, seed) -> Sample:
    """Draw an unlabelled test sample of size ``n`` from the mixture."""
    x, _ = sample_labelled(model, n, seed)
    return Sample(x)
