"""Command-line interface.

JSON reports go to stdout, diagnostics to stderr. Every numeric field is
serialized with 6 significant decimals and duplicated at full precision
under the "exact" key. Exit codes: 0 success, 1 input error, 2
degenerate-statistics conditions (listed under "flags"), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import binning, diagram
from ._numeric import chi2_sf
from .decomposition import (
    aggregate_decompositions,
    cr_decompose,
    lb_decompose,
    yates_decompose,
)
from .discrimination import discrimination_summary, five_number_summary
from .domain import CATEGORIES, BinaryForecastSeries, ScoreDecomposition
from .errors import VerificationError
from .inference import (
    classify_reliability_profile,
    deviance_test,
    fit_cox_calibration,
    ignorance_lr_test,
    spiegelhalter_z,
    wald_tests,
)
from .ingest import one_vs_all, parse_binary_csv, parse_forecast_csv, parse_odds_csv
from .scoring import HALF_BRIER, IGNORANCE, ZERO_ONE, mean_rps, mean_score
from .simulate import ForecastLaw, generate

SCHEMA_VERSION = 1

_RULES = {"brier": HALF_BRIER, "log": IGNORANCE, "zero-one": ZERO_ONE}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fverify",
                     description="Verification toolkit for probabilistic "
                                 "forecasts of binary and three-way outcomes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p, odds_flag=False):
        p.add_argument("--input", required=True, help="input CSV path")
        if odds_flag:
            p.add_argument("--odds", action="store_true",
                           help="input holds decimal odds instead of probabilities")
        p.add_argument("--category", choices=["H", "D", "A", "all"],
                       type=lambda s: "all" if s.lower() == "all" else s.upper(),
                       default=None, help="one-vs-all category (default: all)")

    p = sub.add_parser("score", help="mean scores per category")
    add_input(p, odds_flag=True)
    p.add_argument("--rule", choices=["brier", "log", "zero-one", "rps"],
                   default="brier")

    p = sub.add_parser("decompose", help="mean Brier score decompositions")
    add_input(p)
    p.add_argument("--method", choices=["cr", "lb", "yates", "all"], default="cr")
    _add_binning_flags(p)

    p = sub.add_parser("calibrate", help="reliability tests and logistic recalibration")
    add_input(p)

    p = sub.add_parser("discriminate", help="conditional-distribution diagnostics")
    add_input(p)

    p = sub.add_parser("diagram", help="reliability diagram data and rendering")
    add_input(p)
    _add_binning_flags(p)
    p.add_argument("--bands", action="store_true", help="compute consistency bands")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-svg", help="write the diagram SVG here")
    p.add_argument("--out-csv", help="write the diagram CSV here")

    p = sub.add_parser("odds-convert", help="decimal odds CSV to forecast CSV")
    p.add_argument("--input", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic binary series CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--law", default="beta:2,2",
                   help="forecast law, e.g. beta:2,2 or uniform:0.05,0.95")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _add_binning_flags(p):
    p.add_argument("--binning", choices=["fixed", "quantile", "pav"], default="pav")
    p.add_argument("--bins", type=int, default=10,
                   help="bin count for fixed (equal width) or quantile binning")
    p.add_argument("--preset", choices=sorted(binning.PRESETS),
                   help="named fixed-threshold preset (overrides --binning/--bins)")


def _make_binner(args):
    if getattr(args, "preset", None):
        return lambda s: binning.bin_preset(s, args.preset)
    if args.binning == "pav":
        return binning.pav_calibrate
    if args.binning == "quantile":
        return lambda s: binning.bin_quantile(s, args.bins)
    if args.bins < 2:
        raise VerificationError("fixed binning needs --bins of at least 2")
    thresholds = [k / args.bins for k in range(1, args.bins)]
    return lambda s: binning.bin_fixed(s, thresholds)


def _load_input(args, *, allow_odds=False):
    """Returns ("binary", series) or ("multi", series) from the input CSV."""
    text = Path(args.input).read_text(encoding="utf-8")
    header = text.splitlines()[0].strip().lower() if text.splitlines() else ""
    columns = [c.strip() for c in header.split(",")]
    if allow_odds and getattr(args, "odds", False):
        return "multi", parse_odds_csv(text)
    if columns[:2] == ["p", "x"]:
        if getattr(args, "category", None) is not None:
            raise VerificationError("--category does not apply to a binary p,x input")
        return "binary", parse_binary_csv(text)
    return "multi", parse_forecast_csv(text)


def _selected_categories(args) -> list[str]:
    cat = getattr(args, "category", None) or "all"
    return list(CATEGORIES) if cat == "all" else [cat]


def _binary_per_category(kind, series, args):
    """Yield (label, binary series) pairs for the selected categories."""
    if kind == "binary":
        yield "series", series
    else:
        for category in _selected_categories(args):
            yield category, one_vs_all(series, category)


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _round6(value):
    if isinstance(value, dict):
        return {k: _round6(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round6(v) for v in value]
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.6g}")
    return value


def _emit_json(payload: dict) -> None:
    doc = {"schema_version": SCHEMA_VERSION}
    doc.update(_round6(payload))
    doc["exact"] = payload
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _collect_flags(record) -> list[str]:
    flags = []
    if isinstance(record, dict):
        for key, value in record.items():
            if key == "flags" and isinstance(value, (list, tuple)):
                flags.extend(value)
            else:
                flags.extend(_collect_flags(value))
    elif isinstance(record, (list, tuple)):
        for value in record:
            flags.extend(_collect_flags(value))
    return flags


def _decomposition_record(dec: ScoreDecomposition) -> dict:
    return {
        "method": dec.method,
        "components": {k: _clean(v) for k, v in dec.components.items()},
        "contributions": {k: _clean(v) for k, v in dec.contributions().items()},
        "percent_of_uncertainty": {k: _clean(v)
                                   for k, v in dec.percent_of_uncertainty().items()},
        "mean_score": _clean(dec.mean_score),
        "skill": _clean(dec.skill) if dec.skill is not None else None,
        "flags": list(dec.flags),
    }


def _test_record(result) -> dict:
    return {
        "statistic": _clean(result.statistic),
        "df": result.df,
        "p_value": _clean(result.p_value),
        "sided": result.sided,
        "flags": list(result.flags),
    }


def _cmd_score(args) -> dict:
    kind, series = _load_input(args, allow_odds=True)
    if args.rule == "rps":
        if kind != "multi":
            raise VerificationError("the rps rule needs a three-way forecast input")
        return {"command": "score", "rule": "rps",
                "scores": {"rps": mean_rps(series)}}
    rule = _RULES[args.rule]
    scores: dict[str, float] = {}
    parts = []
    for label, binary in _binary_per_category(kind, series, args):
        value = mean_score(binary, rule)
        scores[label] = value
        parts.append(value)
    if kind == "multi" and (args.category or "all") == "all":
        scores["All"] = math.fsum(parts)
    return {"command": "score", "rule": args.rule, "scores": scores}


def _cmd_decompose(args) -> dict:
    kind, series = _load_input(args)
    binner = _make_binner(args)
    methods = ["cr", "lb", "yates"] if args.method == "all" else [args.method]

    def decompose_one(binary: BinaryForecastSeries, method: str) -> ScoreDecomposition:
        if method == "cr":
            return cr_decompose(binary, binner(binary))
        if method == "lb":
            return lb_decompose(binary)
        return yates_decompose(binary)

    categories: dict[str, dict] = {}
    per_method_parts: dict[str, list[ScoreDecomposition]] = {m: [] for m in methods}
    for label, binary in _binary_per_category(kind, series, args):
        record = {}
        for method in methods:
            dec = decompose_one(binary, method)
            per_method_parts[method].append(dec)
            record[method] = _decomposition_record(dec)
        categories[label] = record
    if kind == "multi" and (args.category or "all") == "all":
        categories["All"] = {
            method: _decomposition_record(aggregate_decompositions(parts))
            for method, parts in per_method_parts.items()
        }
    return {"command": "decompose", "methods": methods,
            "binning": args.preset or args.binning, "categories": categories}


def _cmd_calibrate(args) -> dict:
    kind, series = _load_input(args)
    categories: dict[str, dict] = {}
    for label, binary in _binary_per_category(kind, series, args):
        record: dict = {"flags": []}
        try:
            z = spiegelhalter_z(binary)
            record["spiegelhalter"] = {
                "z": _clean(z), "z_squared": _clean(z * z), "df": 1,
                "p_value": _clean(chi2_sf(z * z, 1)),
            }
        except VerificationError as exc:
            record["spiegelhalter"] = None
            record["flags"].append(_flag_name(exc))
        try:
            fit = fit_cox_calibration(binary)
            cox: dict = {
                "alpha": {"estimate": _clean(fit.alpha), "se": _clean(fit.se_alpha)},
                "beta": {"estimate": _clean(fit.beta), "se": _clean(fit.se_beta)},
                "converged": fit.converged,
                "iterations": fit.iterations,
                "flags": list(fit.flags),
            }
            if fit.converged:
                wald_a, wald_b = wald_tests(fit)
                cox["alpha"]["wald"] = _test_record(wald_a)
                cox["beta"]["wald"] = _test_record(wald_b)
                cox["deviance"] = {
                    "null": _clean(fit.deviance_null),
                    "fitted": _clean(fit.deviance_fitted),
                    "test": _test_record(deviance_test(fit)),
                }
                cox["profile"] = classify_reliability_profile(fit)
                cox["profile_is_heuristic"] = True
                record["ignorance_lr"] = _test_record(ignorance_lr_test(binary, fit))
            record["cox"] = cox
        except VerificationError as exc:
            record["cox"] = None
            record["flags"].append(_flag_name(exc))
        categories[label] = record
    return {"command": "calibrate", "categories": categories}


def _cmd_discriminate(args) -> dict:
    kind, series = _load_input(args)
    categories: dict[str, dict] = {}
    for label, binary in _binary_per_category(kind, series, args):
        try:
            summary = discrimination_summary(binary)
        except VerificationError as exc:
            categories[label] = {"flags": [_flag_name(exc)]}
            continue
        p0 = binary.forecasts[binary.outcomes == 0.0]
        p1 = binary.forecasts[binary.outcomes == 1.0]
        names = ("min", "q1", "median", "q3", "max")
        categories[label] = {
            "n0": summary.n0, "n1": summary.n1,
            "mean_class0": _clean(summary.m0), "mean_class1": _clean(summary.m1),
            "diff": _clean(summary.diff),
            "wilcoxon": _test_record(summary.wilcoxon),
            "ks": _test_record(summary.ks),
            "c_statistic": _clean(summary.c_statistic),
            "class0_summary": dict(zip(names, map(_clean, five_number_summary(p0)))),
            "class1_summary": dict(zip(names, map(_clean, five_number_summary(p1)))),
            "flags": [],
        }
    return {"command": "discriminate", "categories": categories}


def _cmd_diagram(args) -> dict:
    kind, series = _load_input(args)
    if kind == "multi":
        cat = args.category if args.category and args.category != "all" else None
        if cat is None:
            raise VerificationError("diagram needs a single --category for a three-way input")
        binary = one_vs_all(series, cat)
    else:
        binary = series
    binned = _make_binner(args)(binary)
    data = diagram.diagram_data(binary, binned, level=args.level, reps=args.reps,
                                seed=args.seed, with_band=args.bands)
    written = {}
    if args.out_svg:
        Path(args.out_svg).write_text(diagram.render_svg(data), encoding="utf-8")
        written["svg"] = args.out_svg
    if args.out_csv:
        Path(args.out_csv).write_text(diagram.export_csv(data), encoding="utf-8")
        written["csv"] = args.out_csv
    return {
        "command": "diagram",
        "points": int(data.point_forecasts.size),
        "band_points": int(data.band_grid.size),
        "level": data.level,
        "reps": data.reps,
        "seed": data.seed,
        "outputs": written,
    }


def _cmd_odds_convert(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    series = parse_odds_csv(text)
    out = ["match_id,p_home,p_draw,p_away,outcome"]
    for match_id, probs, label in zip(series.match_ids, series.probabilities,
                                      series.outcome_labels):
        out.append(f"{match_id},{probs[0]:.6f},{probs[1]:.6f},{probs[2]:.6f},{label}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _cmd_simulate(args) -> int:
    law = ForecastLaw.parse(args.law)
    series = generate(args.n, args.alpha, args.beta, law, args.seed)
    out = ["p,x"]
    for p, x in zip(series.forecasts, series.outcomes):
        out.append(f"{float(p)!r},{int(x)}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _flag_name(exc: VerificationError) -> str:
    name = type(exc).__name__
    return "".join("_" + c.lower() if c.isupper() else c for c in name).lstrip("_")


def run(argv=None) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(str(exc) + "\n")
        return 64
    try:
        if args.command == "odds-convert":
            return _cmd_odds_convert(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        handler = {
            "score": _cmd_score,
            "decompose": _cmd_decompose,
            "calibrate": _cmd_calibrate,
            "discriminate": _cmd_discriminate,
            "diagram": _cmd_diagram,
        }[args.command]
        payload = handler(args)
    except (VerificationError, OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    flags = sorted(set(_collect_flags(payload)))
    if flags:
        payload["flags"] = flags
    _emit_json(payload)
    return 2 if flags else 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
