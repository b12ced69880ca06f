"""Binormal benchmark: SMM vs ML standard deviations, ratio surface, Monte Carlo.

The benchmark fixes ``mu0 = 0`` and ``sigma = 1`` and varies ``mu1`` (or,
equivalently, the AUC). Monte Carlo replications draw from independent
streams spawned off one :class:`numpy.random.SeedSequence`, so the result for
replication ``r`` depends only on ``(seed, r)`` and never on scheduling.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .densities import BinormalModel, MixtureModel, sample_mixture
from .efficiency import DEFAULT_SETTINGS, QuadratureSettings, efficiency_report
from .errors import DegeneracyError, DomainError
from .mle import Case, mle_estimate
from .smm import auc, mu1_for_auc, smm_variance

__all__ = [
    "TABLE1_MU1",
    "Table1Row",
    "reproduce_table1",
    "load_table1_expected",
    "compare_table1",
    "RatioGridPoint",
    "DEFAULT_AUC_GRID",
    "DEFAULT_Q_GRID",
    "ratio_surface",
    "surface_csv",
    "MonteCarloSummary",
    "monte_carlo_ml",
    "SmmMonteCarloSummary",
    "monte_carlo_smm",
]

TABLE1_MU1 = (0.01, 0.05, 0.10, 0.25, 0.50, 1.00, 1.50, 2.00, 2.50, 3.00, 3.50, 4.00, 5.00)
TABLE1_N = 100
TABLE1_Q = 0.2

#: Allowed |computed - printed| per column. The printed values are rounded
#: to 4 decimals; sigma_ml additionally carries quadrature error.
TABLE1_TOLERANCES = {"auc": 5e-5, "sigma_smm": 5e-5, "sigma_ml": 1e-4}

DEFAULT_AUC_GRID = (0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 0.99)
DEFAULT_Q_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))


@dataclass(frozen=True)
class Table1Row:
    mu1: float
    auc: float
    sigma_smm: float
    sigma_ml: float


def reproduce_table1(
    mu1_values: Sequence[float] = TABLE1_MU1,
    n: int = TABLE1_N,
    q: float = TABLE1_Q,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> list[Table1Row]:
    """AUC, SMM standard deviation and large-sample ML standard deviation."""
    rows = []
    for mu1 in mu1_values:
        model = BinormalModel(0.0, mu1, 1.0)
        report = efficiency_report(MixtureModel(model, q), n, settings)
        rows.append(Table1Row(
            mu1=mu1,
            auc=auc(model),
            sigma_smm=math.sqrt(smm_variance(model, q, n)),
            sigma_ml=report.sigma_ml,
        ))
    return rows


def load_table1_expected(path=None) -> list[Table1Row]:
    """Read the golden CSV (``mu1,auc,sigma_smm,sigma_ml``)."""
    if path is None:
        text = resources.files("priorshift").joinpath("data/table1_expected.csv").read_text()
    else:
        with open(path, newline="") as fh:
            text = fh.read()
    reader = csv.DictReader(io.StringIO(text))
    return [Table1Row(*(float(rec[k]) for k in ("mu1", "auc", "sigma_smm", "sigma_ml")))
            for rec in reader]


def compare_table1(
    computed: Sequence[Table1Row],
    expected: Sequence[Table1Row],
    tolerances: dict[str, float] = TABLE1_TOLERANCES,
) -> list[dict]:
    """Cells outside tolerance, as dicts ``{mu1, column, computed, expected, diff}``.

    An empty list means the table matches.
    """
    if len(computed) != len(expected):
        raise DomainError(f"row count mismatch: {len(computed)} vs {len(expected)}")
    mismatches = []
    for got, want in zip(computed, expected):
        if not math.isclose(got.mu1, want.mu1, abs_tol=1e-12):
            raise DomainError(f"mu1 mismatch: {got.mu1} vs {want.mu1}")
        for column, tol in tolerances.items():
            a, b = getattr(got, column), getattr(want, column)
            if not abs(a - b) <= tol:
                mismatches.append(
                    {"mu1": want.mu1, "column": column, "computed": a, "expected": b,
                     "diff": a - b})
    return mismatches


@dataclass(frozen=True)
class RatioGridPoint:
    auc: float
    q: float
    ratio: float


def _sd_ratio(model: BinormalModel, q: float, n: int, settings) -> float:
    report = efficiency_report(MixtureModel(model, q), n, settings)
    return math.sqrt(smm_variance(model, q, n) / report.asym_var_ml)


def ratio_surface(
    auc_grid: Iterable[float] = DEFAULT_AUC_GRID,
    q_grid: Iterable[float] = DEFAULT_Q_GRID,
    n: int = TABLE1_N,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> list[RatioGridPoint]:
    """``sigma_smm / sigma_ml`` over an (AUC, q) grid, AUC-major order.

    Both standard deviations scale as ``n**-0.5``; the ratio is recomputed at
    ``4 n`` and a discrepancy beyond 1e-9 is treated as a bug.
    """
    auc_grid, q_grid = list(auc_grid), list(q_grid)
    if not auc_grid or not q_grid:
        raise DomainError("grids must be nonempty")
    points = []
    for a in auc_grid:
        model = BinormalModel(0.0, mu1_for_auc(a), 1.0)
        for q in q_grid:
            if not 0.0 < q < 1.0:
                raise DomainError(f"q must lie in (0, 1), got {q}")
            ratio = _sd_ratio(model, q, n, settings)
            check = _sd_ratio(model, q, 4 * n, settings)
            if abs(ratio - check) > 1e-9 * ratio:
                raise AssertionError(f"sd ratio depends on n at auc={a}, q={q}")
            points.append(RatioGridPoint(a, q, ratio))
    return points


def surface_csv(points: Iterable[RatioGridPoint]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["auc", "q", "ratio_sd_smm_over_ml"])
    for p in points:
        writer.writerow([f"{p.auc:.6f}", f"{p.q:.6f}", f"{p.ratio:.6f}"])
    return out.getvalue()


@dataclass(frozen=True)
class MonteCarloSummary:
    """Empirical behaviour of the MLE over seeded replications.

    ``boundary_hits`` counts replications whose estimate is exactly 0 or 1;
    they are kept in the mean and sd. ``skipped`` counts degenerate samples.
    """

    replications: int
    n: int
    true_q: float
    mean_q_hat: float
    sd_q_hat: float
    predicted_sd: float
    boundary_hits: int
    skipped: int = 0


def _one_ml_replication(model: MixtureModel, n: int, seed_seq):
    sample = sample_mixture(model, n, seed_seq)
    try:
        return mle_estimate(model.densities, sample)
    except DegeneracyError:
        return None


def monte_carlo_ml(
    model: MixtureModel,
    n: int,
    replications: int,
    seed: int,
    workers: int = 1,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> MonteCarloSummary:
    """Sampling distribution of the MLE versus ``sqrt(1 / (n I(q)))``."""
    if replications < 100:
        raise DomainError("need at least 100 replications")
    if not 0.0 < model.q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {model.q}")
    streams = np.random.SeedSequence(seed).spawn(replications)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: _one_ml_replication(model, n, s), streams))
    else:
        results = [_one_ml_replication(model, n, s) for s in streams]
    estimates = [r for r in results if r is not None]
    q_hats = np.array([r.q_hat for r in estimates])
    boundary = sum(r.case is not Case.INTERIOR for r in estimates)
    predicted = efficiency_report(model, n, settings).sigma_ml
    return MonteCarloSummary(
        replications=replications,
        n=n,
        true_q=model.q,
        mean_q_hat=float(np.mean(q_hats)),
        sd_q_hat=float(np.std(q_hats, ddof=1)),
        predicted_sd=predicted,
        boundary_hits=int(boundary),
        skipped=replications - len(estimates),
    )


@dataclass(frozen=True)
class SmmMonteCarloSummary:
    replications: int
    n: int
    true_q: float
    mean_q_hat: float
    var_q_hat: float
    exact_var: float


def monte_carlo_smm(
    model: BinormalModel,
    q: float,
    n: int,
    replications: int,
    seed: int,
    chunk: int = 10_000,
) -> SmmMonteCarloSummary:
    """Empirical mean and variance of the raw SMM estimator.

    Replications are generated in blocks from a single PCG64 stream; the
    estimator is vectorised so this handles ~1e5 replications in seconds.
    """
    rng = np.random.default_rng(seed)
    delta = model.mu1 - model.mu0
    estimates = np.empty(replications)
    for start in range(0, replications, chunk):
        stop = min(start + chunk, replications)
        labels = rng.random((stop - start, n)) < q
        x = np.where(labels, model.mu1, model.mu0) + model.sigma * rng.standard_normal(labels.shape)
        estimates[start:stop] = (x.mean(axis=1) - model.mu0) / delta
    return SmmMonteCarloSummary(
        replications=replications,
        n=n,
        true_q=q,
        mean_q_hat=float(estimates.mean()),
        var_q_hat=float(estimates.var(ddof=1)),
        exact_var=smm_variance(model, q, n),
    )
