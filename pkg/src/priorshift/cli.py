"""Command-line interface.

Subcommands: ``estimate``, ``report``, ``table1``, ``figure1``, ``simulate``.
Exit codes: 0 success, 1 golden-table mismatch, 2 I/O or parse error,
3 domain or degeneracy error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict

from . import __version__
from .densities import BinormalModel, MixtureModel, Sample
from .efficiency import QuadratureSettings, efficiency_report
from .errors import ConvergenceError, DegeneracyError, DomainError, PriorShiftError
from .experiments import (
    DEFAULT_AUC_GRID,
    DEFAULT_Q_GRID,
    compare_table1,
    load_table1_expected,
    monte_carlo_ml,
    ratio_surface,
    reproduce_table1,
    surface_csv,
)
from .mle import Case, em_estimate, grid_oracle, mle_estimate
from .smm import auc, smm_report, smm_variance

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_IO = 2
EXIT_DOMAIN = 3


class InputError(PriorShiftError):
    """Unreadable, empty or malformed input file."""


def read_sample_file(path: str) -> Sample:
    """One real per line; ``#`` comments, blank lines and a leading ``x`` header are skipped."""
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    values = []
    seen_data = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not seen_data and line.lower() == "x":
            seen_data = True
            continue
        seen_data = True
        try:
            value = float(line)
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a number: {line!r}") from None
        if not math.isfinite(value):
            raise InputError(f"{path}:{lineno}: non-finite value {line!r}")
        values.append(value)
    if not values:
        raise InputError(f"{path}: no data")
    return Sample(values)


def _settings(args) -> QuadratureSettings:
    return QuadratureSettings(abs_tol=args.abs_tol, rel_tol=args.rel_tol)


def _model(args) -> BinormalModel:
    if args.mu1 is None:
        raise DomainError(f"{args.command} requires --mu1")
    return BinormalModel(args.mu0, args.mu1, args.sigma)


def _model_doc(model: BinormalModel) -> dict:
    return {"mu0": model.mu0, "mu1": model.mu1, "sigma": model.sigma}


def _flat_csv(doc: dict) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["field", "value"])

    def walk(prefix, value):
        if isinstance(value, dict):
            for key, sub in value.items():
                walk(f"{prefix}.{key}" if prefix else key, sub)
        else:
            writer.writerow([prefix, "" if value is None else _fmt(value)])

    walk("", doc)
    return out.getvalue()


def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def _render(doc: dict, fmt: str) -> str:
    if fmt == "csv":
        return _flat_csv(doc)
    return json.dumps(doc, indent=2) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_estimate(args) -> int:
    if args.input is None:
        raise InputError("estimate requires --input")
    model = _model(args)
    sample = read_sample_file(args.input)
    ml = mle_estimate(model, sample)
    try:
        em = em_estimate(model, sample)
        em_doc = {"q_hat": em.q_hat, "case": em.case.value, "iterations": em.iterations}
    except ConvergenceError as exc:
        em_doc = {"q_hat": None, "case": None, "iterations": exc.iterations,
                  "note": f"no convergence; last iterate {exc.last_iterate!r}"}
    smm = smm_report(model, sample)
    doc = {
        "n": sample.n,
        "model": _model_doc(model),
        "ml": {"q_hat": ml.q_hat, "case": ml.case.value, "iterations": ml.iterations},
        "em": em_doc,
        "smm": {"q_hat": smm.q_hat, "q_hat_clipped": smm.q_hat_clipped},
    }
    if args.grid_step is not None:
        doc["grid"] = {"q_hat": grid_oracle(model, sample, args.grid_step).q_hat,
                       "grid_step": args.grid_step}
    if ml.case is Case.INTERIOR:
        # plug-in: the true q is unknown, evaluate the bound at q_hat
        report = efficiency_report(MixtureModel(model, ml.q_hat), sample.n, _settings(args))
        doc["cramer_rao_sd"] = report.sigma_ml
        doc["cramer_rao_note"] = "evaluated at the ML estimate (plug-in)"
    else:
        doc["cramer_rao_sd"] = None
        doc["cramer_rao_note"] = f"omitted: ML estimate is on the boundary ({ml.case.value})"
    _emit(_render(doc, args.format or "json"), args.output)
    return EXIT_OK


def cmd_report(args) -> int:
    model = _model(args)
    mixture = MixtureModel(model, args.q)
    report = efficiency_report(mixture, args.n, _settings(args))
    doc = {"model": _model_doc(model), **asdict(report),
           "sigma_ml": report.sigma_ml,
           "sigma_smm": math.sqrt(smm_variance(model, args.q, args.n)),
           "auc": auc(model)}
    _emit(_render(doc, args.format or "json"), args.output)
    return EXIT_OK


def cmd_table1(args) -> int:
    rows = reproduce_table1(n=args.n, q=args.q, settings=_settings(args))
    fmt = args.format or "csv"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["mu1", "auc", "sigma_smm", "sigma_ml"])
        for r in rows:
            writer.writerow([f"{r.mu1:.2f}", f"{r.auc:.6f}", f"{r.sigma_smm:.6f}", f"{r.sigma_ml:.6f}"])
        text = out.getvalue()
    else:
        text = json.dumps([asdict(r) for r in rows], indent=2) + "\n"
    _emit(text, args.output)

    try:
        expected = load_table1_expected(args.golden)
    except OSError as exc:
        raise InputError(f"cannot read golden file: {exc}") from exc
    if args.n != 100 or args.q != 0.2:
        print("table1: golden comparison skipped (non-default n or q)", file=sys.stderr)
        return EXIT_OK
    mismatches = compare_table1(rows, expected)
    for r in rows:
        bad = [m for m in mismatches if m["mu1"] == r.mu1]
        print(f"table1 mu1={r.mu1:.2f}: {'FAIL' if bad else 'pass'}", file=sys.stderr)
        for m in bad:
            print(f"  {m['column']}: computed {m['computed']:.6f} expected {m['expected']:.4f} "
                  f"diff {m['diff']:+.2e}", file=sys.stderr)
    return EXIT_MISMATCH if mismatches else EXIT_OK


def _float_list(text: str) -> list[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def cmd_figure1(args) -> int:
    points = ratio_surface(args.auc_grid, args.q_grid, args.n, _settings(args))
    if (args.format or "csv") == "csv":
        text = surface_csv(points)
    else:
        text = json.dumps([asdict(p) for p in points], indent=2) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = _model(args)
    summary = monte_carlo_ml(MixtureModel(model, args.q), args.n, args.reps, args.seed,
                             settings=_settings(args))
    doc = {"model": _model_doc(model), "seed": args.seed, **asdict(summary)}
    _emit(_render(doc, args.format or "json"), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu0", type=float, default=0.0)
    common.add_argument("--mu1", type=float, default=None)
    common.add_argument("--sigma", type=float, default=1.0)
    common.add_argument("--q", type=float, default=0.2)
    common.add_argument("--n", type=int, default=100)
    common.add_argument("--reps", type=int, default=1000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--input")
    common.add_argument("--output")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--abs-tol", type=float, default=1e-10)
    common.add_argument("--rel-tol", type=float, default=1e-8)
    common.add_argument("--grid-step", type=float, default=None)

    parser = argparse.ArgumentParser(
        prog="priorshift",
        description="Prevalence estimation under prior probability shift (binormal model).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("estimate", parents=[common], help="ML / EM / SMM estimates from a sample file")
    sub.add_parser("report", parents=[common], help="Fisher information, Cramer-Rao bound, Brier decomposition")
    t1 = sub.add_parser("table1", parents=[common], help="SMM vs ML standard deviations, checked against golden values")
    t1.add_argument("--golden", help="alternative golden CSV")
    f1 = sub.add_parser("figure1", parents=[common], help="sd ratio SMM/ML over an AUC x prevalence grid")
    f1.add_argument("--auc-grid", type=_float_list, default=list(DEFAULT_AUC_GRID))
    f1.add_argument("--q-grid", type=_float_list, default=list(DEFAULT_Q_GRID))
    sub.add_parser("simulate", parents=[common], help="Monte Carlo check of the ML asymptotic variance")
    return parser


COMMANDS = {
    "estimate": cmd_estimate,
    "report": cmd_report,
    "table1": cmd_table1,
    "figure1": cmd_figure1,
    "simulate": cmd_simulate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, DegeneracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
