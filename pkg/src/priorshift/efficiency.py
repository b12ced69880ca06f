"""Fisher information, Cramer-Rao bound and Brier-score decomposition.

For a mixture ``f_q = (1 - q) f0 + q f1`` the per-observation Fisher
information with respect to ``q`` is

    I(q) = E_q[((f1(X) - f0(X)) / f_q(X))**2],

and ``1 / (n I(q))`` is both the Cramer-Rao lower bound for unbiased
estimators of ``q`` and the large-sample variance of the ML estimator. With
the posterior ``eta(x) = q f1(x) / f_q(x)`` one has

    I(q) = var_q[eta(X)] / (q**2 (1 - q)**2),
    BS   = E_q[(Y - eta(X))**2] = q (1 - q) - var_q[eta(X)].

All expectations are one-dimensional integrals evaluated by :func:`integrate`,
an adaptive Gauss-Kronrod (7/15 point) scheme. Integrands are formed from
log-densities so that tails underflow cleanly to zero instead of producing
``0/0``.
"""

from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .densities import MixtureModel, _as_finite_array, _scalar_or_array
from .errors import DegeneracyError, DomainError, QuadratureError

__all__ = [
    "QuadratureSettings",
    "EfficiencyReport",
    "DegeneracyWarning",
    "integrate",
    "posterior",
    "fisher_information",
    "resolution",
    "brier_score",
    "efficiency_report",
]


class DegeneracyWarning(UserWarning):
    """The density pair carries no information about ``q`` (``f1 == f0``)."""


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")


DEFAULT_SETTINGS = QuadratureSettings()

# Gauss-Kronrod 15-point nodes on [0, 1] (mirrored), Kronrod weights, and the
# weights of the embedded 7-point Gauss rule at the odd-indexed nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]
GAUSS_WEIGHTS[7] = _WG[3]

_INITIAL_PANELS = 8


def _gauss_kronrod(g, a, b):
    half = 0.5 * (b - a)
    values = g(0.5 * (a + b) + half * NODES)
    kronrod = half * (KRONROD_WEIGHTS @ values)
    gauss = half * (GAUSS_WEIGHTS @ values)
    return kronrod, abs(kronrod - gauss)


def _map_to_finite(f, domain):
    """Return ``(g, a, b)`` with ``int_domain f == int_a^b g`` and a, b finite.

    Both ends infinite: ``x = t / (1 - t**2)`` on (-1, 1).
    One end infinite: ``x = a + t / (1 - t)`` on [0, 1) (mirrored for -inf).
    """
    lo, hi = map(float, domain)
    if not lo < hi:
        raise DomainError(f"empty integration domain {domain!r}")

    def guarded(values):
        values = np.asarray(values, dtype=float)
        # weight * f(x) with f underflowed to 0 must stay 0, never nan
        return np.where(np.isfinite(values), values, 0.0)

    if math.isinf(lo) and math.isinf(hi):
        def g(t):
            s = 1.0 - t * t
            x = t / s
            return guarded(f(x) * ((1.0 + t * t) / (s * s)))
        return g, -1.0, 1.0
    if math.isinf(hi):
        def g(t):
            s = 1.0 - t
            return guarded(f(lo + t / s) / (s * s))
        return g, 0.0, 1.0
    if math.isinf(lo):
        def g(t):
            s = 1.0 - t
            return guarded(f(hi - t / s) / (s * s))
        return g, 0.0, 1.0
    return (lambda x: np.asarray(f(x), dtype=float)), lo, hi


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    domain: tuple[float, float] = (-math.inf, math.inf),
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Adaptive Gauss-Kronrod quadrature of a vectorised function.

    The panel with the largest error estimate is bisected until the summed
    error is at most ``max(abs_tol, rel_tol * |result|)``.

    Args:
        f: function accepting and returning numpy arrays.
        domain: ``(lo, hi)``; either end may be infinite.
        settings: tolerances and subdivision budget.

    Raises:
        QuadratureError: if the budget is exhausted first. The exception
            carries the best estimate and its error bound.
    """
    g, a, b = _map_to_finite(f, domain)
    edges = np.linspace(a, b, _INITIAL_PANELS + 1)
    heap = []
    total = 0.0
    error = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        value, err = _gauss_kronrod(g, left, right)
        heapq.heappush(heap, (-err, left, right, value))
        total += value
        error += err

    subdivisions = 0
    while error > max(settings.abs_tol, settings.rel_tol * abs(total)):
        if subdivisions >= settings.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {subdivisions} subdivisions "
                f"(estimate {total!r}, error {error!r})",
                estimate=total,
                error=error,
            )
        neg_err, left, right, value = heapq.heappop(heap)
        mid = 0.5 * (left + right)
        v1, e1 = _gauss_kronrod(g, left, mid)
        v2, e2 = _gauss_kronrod(g, mid, right)
        heapq.heappush(heap, (-e1, left, mid, v1))
        heapq.heappush(heap, (-e2, mid, right, v2))
        total += v1 + v2 - value
        error += e1 + e2 + neg_err
        subdivisions += 1
    # re-sum to shed accumulated update round-off
    return float(math.fsum(item[3] for item in heap))


def _require_interior(q):
    if not 0.0 < q < 1.0:
        raise DomainError(f"Fisher information needs 0 < q < 1, got {q}")


def _log_posterior(model: MixtureModel, x):
    if model.q == 0.0:
        return np.full(np.shape(x), -np.inf)
    return math.log(model.q) + model.densities.logpdf1(x) - model.logpdf(x)


def posterior(model: MixtureModel, x):
    """Positive-class posterior ``q f1(x) / f_q(x)`` under the test mixture."""
    x = _as_finite_array(x)
    return _scalar_or_array(np.exp(_log_posterior(model, x)))


def _fisher_integrand(model: MixtureModel):
    pair = model.densities

    def integrand(x):
        l0 = pair.logpdf0(x)
        l1 = pair.logpdf1(x)
        hi = np.maximum(l0, l1)
        lo = np.minimum(l0, l1)
        # (f1 - f0)^2 / f_q  ==  exp(2 hi - log f_q) * (1 - exp(lo - hi))^2
        gap = -np.expm1(lo - hi)
        return np.exp(2.0 * hi - model.logpdf(x)) * gap * gap

    return integrand


def fisher_information(
    model: MixtureModel, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> float:
    """Per-observation Fisher information ``int (f1 - f0)**2 / f_q``.

    Returns 0 (and emits :class:`DegeneracyWarning`) when ``f1 == f0``.
    """
    _require_interior(model.q)
    value = integrate(_fisher_integrand(model), model.densities.support, settings)
    if value <= 0.0:
        warnings.warn("f1 and f0 coincide; the Fisher information is zero",
                      DegeneracyWarning, stacklevel=2)
        return 0.0
    return value


def resolution(
    model: MixtureModel, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> float:
    """Variance of the posterior under the test mixture.

    Computed as ``E[eta**2] - q**2`` since ``E[eta] = q`` exactly.
    """
    q = model.q
    if q in (0.0, 1.0):
        return 0.0
    log_q = math.log(q)
    pair = model.densities

    def second_moment(x):
        # eta^2 f_q = q^2 f1^2 / f_q
        return np.exp(2.0 * (log_q + pair.logpdf1(x)) - model.logpdf(x))

    value = integrate(second_moment, pair.support, settings) - q * q
    return min(max(value, 0.0), q * (1.0 - q))


def brier_score(
    model: MixtureModel, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> float:
    """Optimal Brier score: uncertainty ``q (1 - q)`` minus resolution."""
    return model.q * (1.0 - model.q) - resolution(model, settings)


@dataclass(frozen=True)
class EfficiencyReport:
    """Efficiency quantities of a mixture model at sample size ``n``.

    ``cr_bound`` and ``asym_var_ml`` are the same number: the Cramer-Rao bound
    for unbiased estimators is also the large-sample ML variance.
    """

    q: float
    n: int
    fisher_info: float
    cr_bound: float
    asym_var_ml: float
    resolution: float
    brier: float
    uncertainty: float

    @property
    def sigma_ml(self) -> float:
        return math.sqrt(self.asym_var_ml)


def efficiency_report(
    model: MixtureModel, n: int, settings: QuadratureSettings = DEFAULT_SETTINGS
) -> EfficiencyReport:
    """Assemble Fisher information, bounds and Brier decomposition.

    Examples:
        >>> from priorshift.densities import BinormalModel
        >>> rep = efficiency_report(MixtureModel(BinormalModel(0, 2, 1), 0.2), 100)
        >>> round(rep.sigma_ml, 4)
        0.0571
    """
    _require_interior(model.q)
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    info = integrate(_fisher_integrand(model), model.densities.support, settings)
    if info <= 0.0:
        raise DegeneracyError("f1 and f0 coincide; q is not identifiable")
    bound = 1.0 / (n * info)
    res = resolution(model, settings)
    uncertainty = model.q * (1.0 - model.q)
    return EfficiencyReport(
        q=model.q,
        n=n,
        fisher_info=info,
        cr_bound=bound,
        asym_var_ml=bound,
        resolution=res,
        brier=uncertainty - res,
        uncertainty=uncertainty,
    )
