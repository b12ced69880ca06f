"""Maximum-likelihood estimation of the test-set positive prevalence.

With known class-conditional densities the log-likelihood of a test sample

    log L(q) = sum_i log(q (f1(z_i) - f0(z_i)) + f0(z_i))

is strictly concave on [0, 1] as soon as one point has ``f1(z_j) != f0(z_j)``.
Its maximiser is found without ever touching the score at the endpoints:

* mean of ``f1/f0`` over the sample <= 1  ->  maximum at q = 0;
* mean of ``f0/f1`` over the sample <= 1  ->  maximum at q = 1;
* otherwise the score has a unique root in (0, 1), located by bisection.

An EM fixed-point iteration and a brute-force grid search are provided as
independent cross-checks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp

from .densities import DensityPair, Sample, as_sample
from .errors import ConvergenceError, DegeneracyError, DomainError

__all__ = [
    "Case",
    "PrevalenceEstimate",
    "RatioSummary",
    "GridResult",
    "log_likelihood",
    "score",
    "classify_case",
    "mle_estimate",
    "em_estimate",
    "grid_oracle",
]

DEGENERACY_TOL = 1e-12
BRACKET_EPS = 1e-12


class Case(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY_ZERO = "boundary_zero"
    BOUNDARY_ONE = "boundary_one"


@dataclass(frozen=True)
class PrevalenceEstimate:
    """Result of a prevalence solver.

    ``residual`` is ``|score(q_hat)|`` for interior solutions and 0 for the
    boundary cases.
    """

    q_hat: float
    case: Case
    iterations: int
    residual: float

    def __post_init__(self):
        if self.case is Case.BOUNDARY_ZERO and self.q_hat != 0.0:
            raise ValueError("boundary_zero estimate must have q_hat == 0")
        if self.case is Case.BOUNDARY_ONE and self.q_hat != 1.0:
            raise ValueError("boundary_one estimate must have q_hat == 1")
        if self.case is Case.INTERIOR and not 0.0 < self.q_hat < 1.0:
            raise ValueError("interior estimate must satisfy 0 < q_hat < 1")


@dataclass(frozen=True)
class RatioSummary:
    """Sample means of the two likelihood ratios.

    Attributes:
        mean_ratio_10: mean of ``f1(z)/f0(z)``; may be ``inf`` on overflow.
        mean_ratio_01: mean of ``f0(z)/f1(z)``.
        degenerate: every point has ``f1(z) == f0(z)``.
    """

    mean_ratio_10: float
    mean_ratio_01: float
    degenerate: bool

    @property
    def case(self) -> Case:
        if self.degenerate:
            raise DegeneracyError("likelihood is constant in q; no unique maximiser")
        if self.mean_ratio_10 <= 1.0:
            return Case.BOUNDARY_ZERO
        if self.mean_ratio_01 <= 1.0:
            return Case.BOUNDARY_ONE
        return Case.INTERIOR


def _log_ratios(pair: DensityPair, sample) -> np.ndarray:
    return np.asarray(pair.log_ratio(as_sample(sample).values), dtype=float)


def _check_q(q, closed=True):
    ok = 0.0 <= q <= 1.0 if closed else 0.0 < q < 1.0
    if not ok:
        interval = "[0, 1]" if closed else "(0, 1)"
        raise DomainError(f"q must lie in {interval}, got {q}")


def log_likelihood(pair: DensityPair, sample: Sample | np.ndarray, q: float) -> float:
    """Log-likelihood of the sample under the mixture with prevalence ``q``."""
    _check_q(q)
    z = as_sample(sample).values
    l0 = pair.logpdf0(z)
    l1 = pair.logpdf1(z)
    if q == 0.0:
        terms = l0
    elif q == 1.0:
        terms = l1
    else:
        terms = np.logaddexp(math.log1p(-q) + l0, math.log(q) + l1)
    return float(math.fsum(terms))


def _score_terms(log_ratio: np.ndarray, q: float) -> np.ndarray:
    # (r - 1) / (q (r - 1) + 1) with r = exp(log_ratio), rewritten per sign of
    # log_ratio so that neither r nor 1/r is ever formed when it overflows
    pos = log_ratio > 0
    out = np.empty_like(log_ratio)
    u = np.exp(-log_ratio[pos])  # 1/r in (0, 1)
    out[pos] = (1.0 - u) / (q * (1.0 - u) + u)
    d = np.expm1(log_ratio[~pos])  # r - 1 in (-1, 0]
    out[~pos] = d / (q * d + 1.0)
    return out


def _score(log_ratio: np.ndarray, q: float) -> float:
    return float(math.fsum(_score_terms(log_ratio, q)))


def score(pair: DensityPair, sample: Sample | np.ndarray, q: float) -> float:
    """Derivative of the log-likelihood with respect to ``q``, for ``0 < q < 1``.

    Raises:
        DegeneracyError: if ``f1 == f0`` at every sample point.
    """
    _check_q(q, closed=False)
    lr = _log_ratios(pair, sample)
    if np.all(np.abs(lr) < DEGENERACY_TOL):
        raise DegeneracyError("f1 == f0 at every sample point; the score vanishes identically")
    return _score(lr, q)


def _summarize(lr: np.ndarray) -> RatioSummary:
    if np.all(np.abs(lr) < DEGENERACY_TOL):
        return RatioSummary(1.0, 1.0, True)
    log_n = math.log(lr.size)
    m10 = _exp_or_inf(logsumexp(lr) - log_n)
    m01 = _exp_or_inf(logsumexp(-lr) - log_n)
    return RatioSummary(m10, m01, False)


def _exp_or_inf(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def classify_case(pair: DensityPair, sample: Sample | np.ndarray) -> RatioSummary:
    """Mean likelihood ratios of the sample and its degeneracy flag.

    >>> from priorshift.densities import BinormalModel
    >>> s = classify_case(BinormalModel(0, 2, 1), [0.0, 2.0])
    >>> round(s.mean_ratio_10, 5), s.case.value
    (3.7622, 'interior')
    """
    return _summarize(_log_ratios(pair, sample))


def _bisect_root(lr: np.ndarray, tol: float) -> tuple[float, int]:
    lo, hi = BRACKET_EPS, 1.0 - BRACKET_EPS
    # root squeezed against the bracket edge: the edge is the best we can do
    if _score(lr, lo) <= 0.0:
        return lo, 0
    if _score(lr, hi) >= 0.0:
        return hi, 0
    iterations = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        s = _score(lr, mid)
        iterations += 1
        if s > 0.0:
            lo = mid
        elif s < 0.0:
            hi = mid
        else:
            return mid, iterations
    return 0.5 * (lo + hi), iterations


def mle_estimate(
    pair: DensityPair, sample: Sample | np.ndarray, tol: float = 1e-10
) -> PrevalenceEstimate:
    """Maximum-likelihood prevalence with exact boundary handling.

    Args:
        pair: the known class-conditional densities.
        sample: test-set feature values.
        tol: final bracket width of the bisection.

    Raises:
        DegeneracyError: if ``f1 == f0`` at every sample point.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    lr = _log_ratios(pair, sample)
    case = _summarize(lr).case
    if case is Case.BOUNDARY_ZERO:
        return PrevalenceEstimate(0.0, case, 0, 0.0)
    if case is Case.BOUNDARY_ONE:
        return PrevalenceEstimate(1.0, case, 0, 0.0)
    q_hat, iterations = _bisect_root(lr, tol)
    return PrevalenceEstimate(q_hat, case, iterations, abs(_score(lr, q_hat)))


def em_estimate(
    pair: DensityPair,
    sample: Sample | np.ndarray,
    q0: float = 0.5,
    tol: float = 1e-10,
    max_iter: int = 100_000,
) -> PrevalenceEstimate:
    """EM iteration ``q <- mean(q f1(z) / f_q(z))``.

    Stops once successive iterates differ by less than ``tol`` and the
    extrapolated remaining distance to the fixed point (from the observed
    linear contraction rate) is below ``tol`` as well. Fixed points within
    ``tol`` of 0 or 1 are reported as the corresponding boundary case.

    Raises:
        ConvergenceError: after ``max_iter`` updates without convergence.
        DegeneracyError: if ``f1 == f0`` at every sample point.
    """
    _check_q(q0, closed=False)
    lr = _log_ratios(pair, sample)
    if _summarize(lr).degenerate:
        raise DegeneracyError("f1 == f0 at every sample point; every q is an EM fixed point")
    q = q0
    prev_step = math.inf
    for iteration in range(1, max_iter + 1):
        # q f1 / f_q = 1 / (1 + (1 - q)/q * f0/f1), written via the log-ratio
        log_odds = math.log(q) - math.log1p(-q) + lr
        q_new = float(np.mean(np.exp(-np.logaddexp(0.0, -log_odds))))
        step = abs(q_new - q)
        q = q_new
        if q <= 0.0 or q >= 1.0 or step == 0.0:
            break
        if step < tol:
            # EM converges linearly; near-boundary optima contract slowly, so
            # also bound the geometric tail step * rho / (1 - rho)
            rate = step / prev_step
            if rate < 1.0 and step * rate / (1.0 - rate) < tol:
                break
        prev_step = step
    else:
        raise ConvergenceError(
            f"EM did not converge in {max_iter} iterations", last_iterate=q,
            iterations=max_iter,
        )
    if q <= tol:
        return PrevalenceEstimate(0.0, Case.BOUNDARY_ZERO, iteration, 0.0)
    if q >= 1.0 - tol:
        return PrevalenceEstimate(1.0, Case.BOUNDARY_ONE, iteration, 0.0)
    return PrevalenceEstimate(q, Case.INTERIOR, iteration, abs(_score(lr, q)))


class GridResult(NamedTuple):
    q_hat: float
    degenerate: bool


def grid_oracle(
    pair: DensityPair, sample: Sample | np.ndarray, grid_step: float = 1e-3
) -> GridResult:
    """Brute-force maximiser of the log-likelihood over ``{0, step, ..., 1}``.

    Ties go to the smallest ``q``; a constant likelihood (degenerate sample)
    therefore yields ``q_hat = 0`` with ``degenerate=True``.
    """
    if not 0.0 < grid_step <= 0.01:
        raise DomainError(f"grid_step must lie in (0, 0.01], got {grid_step}")
    z = as_sample(sample).values
    steps = int(round(1.0 / grid_step))
    grid = np.minimum(np.arange(steps + 1) * grid_step, 1.0)
    if grid[-1] < 1.0:
        grid = np.append(grid, 1.0)
    l0 = pair.logpdf0(z)[None, :]
    l1 = pair.logpdf1(z)[None, :]
    with np.errstate(divide="ignore"):
        log_q = np.log(grid)[:, None]
        log_1mq = np.log1p(-grid)[:, None]
    loglik = np.logaddexp(log_1mq + l0, log_q + l1).sum(axis=1)
    degenerate = bool(np.all(np.abs(pair.log_ratio(z)) < DEGENERACY_TOL))
    if degenerate:
        return GridResult(0.0, True)
    return GridResult(float(grid[int(np.argmax(loglik))]), False)
