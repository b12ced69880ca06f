"""Sample-Mean-Matching estimator and the binormal AUC.

SMM matches the test sample mean to ``(1 - q) mu0 + q mu1``:

    q_smm = (mean(z) - mu0) / (mu1 - mu0).

It is unbiased, and with known class-conditional means its variance is exact:

    var[q_smm] = (sigma**2 + q (1 - q) (mu1 - mu0)**2) / (n (mu1 - mu0)**2).

For ``mu0 = 0, sigma = 1`` this is ``(1/mu1**2 + q (1 - q)) / n``.

The standard normal CDF is :func:`scipy.special.ndtr` (Cephes, built on the
complementary error function; accurate to a few ulp over the whole line).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .densities import BinormalModel, Sample, as_sample
from .errors import DegeneracyError, DomainError

__all__ = [
    "SmmReport",
    "smm_estimate",
    "smm_variance",
    "smm_report",
    "auc",
    "mu1_for_auc",
]


def _separation(model: BinormalModel) -> float:
    delta = model.mu1 - model.mu0
    if delta == 0.0:
        raise DegeneracyError("mu1 == mu0: the sample mean carries no information on q")
    return delta


def smm_estimate(model: BinormalModel, sample: Sample | np.ndarray) -> float:
    """Raw (unclipped) SMM estimate; may fall outside [0, 1]."""
    delta = _separation(model)
    z = as_sample(sample).values
    return (float(np.mean(z)) - model.mu0) / delta


def smm_variance(model: BinormalModel, q: float, n: int) -> float:
    """Exact variance of the SMM estimator for true prevalence ``q``."""
    if not 0.0 <= q <= 1.0:
        raise DomainError(f"q must lie in [0, 1], got {q}")
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    delta = _separation(model)
    return (model.sigma**2 + q * (1.0 - q) * delta**2) / (n * delta**2)


@dataclass(frozen=True)
class SmmReport:
    q_hat: float
    q_hat_clipped: float
    exact_var: float
    exact_sd: float


def smm_report(
    model: BinormalModel, sample: Sample | np.ndarray, q: float | None = None
) -> SmmReport:
    """SMM estimate with its variance.

    The variance is evaluated at ``q`` if given, else at the clipped estimate.
    """
    sample = as_sample(sample)
    raw = smm_estimate(model, sample)
    clipped = min(1.0, max(0.0, raw))
    var = smm_variance(model, clipped if q is None else q, sample.n)
    return SmmReport(raw, clipped, var, math.sqrt(var))


def auc(model: BinormalModel) -> float:
    """Area under the ROC curve, ``Phi((mu1 - mu0) / (sigma sqrt 2))``."""
    return float(ndtr((model.mu1 - model.mu0) / (model.sigma * math.sqrt(2.0))))


def mu1_for_auc(value: float, mu0: float = 0.0, sigma: float = 1.0) -> float:
    """Invert :func:`auc` for ``mu1`` given ``mu0`` and ``sigma``."""
    if not 0.5 < value < 1.0:
        raise DomainError(f"AUC must lie in (0.5, 1), got {value}")
    return mu0 + sigma * math.sqrt(2.0) * float(ndtri(value))
