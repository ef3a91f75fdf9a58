"""Command line entry point: ``vodcost <subcommand> [flags]``.

Subcommands: synthesize, decide, experiment, fit-time-model, report.
Exit status 0 on success, 1 on invalid input, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import replace

from . import __version__
from .access import VIEW_SCALINGS, PowerLawParams, WeibullParams
from .decision import decide_repository, write_plans_csv
from .experiment import ExperimentSpec, Mode, emit_report, format_report, load_report, run_experiment
from .pricing import PriceConfigError, read_price_book
from .synthesis import (
    REFERENCE_TIME_INTERCEPT,
    REFERENCE_TIME_SLOPE,
    CalibrationError,
    SynthesisParams,
    fit_time_model,
    read_calibration,
    synthesize_repository,
)
from .video import RepositoryFormatError, load_repository, save_repository

log = logging.getLogger("vodcost")


class FlagError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def _csv_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_access_flags(p):
    p.add_argument("--shape", type=float, default=1.0, help="Weibull shape (default 1.0, ~20%% FAVs)")
    p.add_argument("--cutoff", type=float, default=1.6, help="raw Weibull value above which a video is a FAV")
    p.add_argument("--mean-views", type=float, default=1.99, help="target mean views per video")
    p.add_argument("--view-scaling", choices=VIEW_SCALINGS, default="reference")


def _add_time_flags(p):
    p.add_argument("--slope", type=float, help="transcode seconds per MB of GOP")
    p.add_argument("--intercept", type=float, help="transcode seconds at zero size")
    p.add_argument("--calibration", help="CSV of size_mb,seconds to fit the time model from")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vodcost", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("synthesize", help="write a synthetic repository file")
    p.add_argument("--n", type=int, default=50_000, help="number of videos")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--period-months", type=float, default=1.0)
    p.add_argument("--out", required=True)
    _add_access_flags(p)
    _add_time_flags(p)

    p = sub.add_parser("decide", help="plan every video of a repository file")
    p.add_argument("--repo", required=True)
    p.add_argument("--prices", help="price config file (defaults apply when omitted)")
    p.add_argument("--period-months", type=float, help="override the repository's period")
    p.add_argument("--alpha-gop", type=float, default=0.1)
    p.add_argument("--cdn", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("experiment", help="run a cost sweep and write a report")
    p.add_argument("--mode", choices=[m.value for m in Mode], required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=50_000)
    p.add_argument("--repetitions", type=int, default=10)
    p.add_argument("--shapes", type=_csv_floats, help="comma-separated Weibull shapes")
    p.add_argument("--multipliers", type=_csv_floats, help="comma-separated view multipliers")
    p.add_argument("--prices")
    p.add_argument("--period-months", type=float, default=1.0)
    p.add_argument("--alpha-gop", type=float, default=0.1)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    _add_access_flags(p)
    _add_time_flags(p)

    p = sub.add_parser("fit-time-model", help="least-squares fit of GOP transcode time against size")
    p.add_argument("samples", help="CSV of size_mb,seconds")
    p.add_argument("--out", help="also write the fit as key = value lines")

    p = sub.add_parser("report", help="pretty-print a report file")
    p.add_argument("path")
    return parser


def _check_positive(args, *names):
    for name in names:
        value = getattr(args, name, None)
        if value is not None and not (math.isfinite(value) and value > 0):
            raise FlagError("--" + name.replace("_", "-"), f"must be > 0, got {value}")


def _time_model(args) -> tuple[float, float]:
    if args.calibration:
        if args.slope is not None or args.intercept is not None:
            raise FlagError("--calibration", "cannot be combined with --slope/--intercept")
        try:
            fit = fit_time_model(read_calibration(args.calibration))
        except (OSError, CalibrationError) as exc:
            raise FlagError("--calibration", str(exc)) from None
        log.info("time model fitted from %s: slope=%g intercept=%g r2=%.4f",
                 args.calibration, fit.slope, fit.intercept, fit.r_squared)
        return fit.slope, fit.intercept
    if (args.slope is None) != (args.intercept is None):
        missing = "--intercept" if args.intercept is None else "--slope"
        raise FlagError(missing, "--slope and --intercept must be given together")
    if args.slope is None:
        print(
            f"vodcost: no time model given; using reference model "
            f"seconds = {REFERENCE_TIME_SLOPE} * size_mb + {REFERENCE_TIME_INTERCEPT}",
            file=sys.stderr,
        )
        return REFERENCE_TIME_SLOPE, REFERENCE_TIME_INTERCEPT
    return args.slope, args.intercept


def _synthesis_params(args, n: int) -> SynthesisParams:
    slope, intercept = _time_model(args)
    try:
        return SynthesisParams(
            time_model_slope=slope,
            time_model_intercept=intercept,
            n_videos=n,
            period_months=args.period_months,
        )
    except ValueError as exc:
        raise FlagError("--slope/--intercept", str(exc)) from None


def _access(args) -> WeibullParams:
    _check_positive(args, "shape", "cutoff", "mean_views")
    return WeibullParams(
        shape=args.shape,
        target_mean_views=args.mean_views,
        fav_cutoff=args.cutoff,
        view_scaling=args.view_scaling,
    )


def _prices(args):
    try:
        return read_price_book(args.prices)
    except OSError as exc:
        raise FlagError("--prices", str(exc)) from None
    except PriceConfigError as exc:
        raise FlagError("--prices", str(exc)) from None


def _power_law(args) -> PowerLawParams:
    if not args.alpha_gop >= 0:
        raise FlagError("--alpha-gop", f"must be >= 0, got {args.alpha_gop}")
    return PowerLawParams(args.alpha_gop)


def _check_jobs(args):
    if args.jobs < 1:
        raise FlagError("--jobs", f"must be >= 1, got {args.jobs}")


def cmd_synthesize(args) -> int:
    if args.n < 1:
        raise FlagError("--n", f"must be >= 1, got {args.n}")
    _check_positive(args, "period_months")
    access = _access(args)
    params = _synthesis_params(args, args.n)
    repo = synthesize_repository(params, access, args.seed)
    save_repository(repo, args.out)
    log.info("wrote %d videos to %s", len(repo), args.out)
    return 0


def cmd_decide(args) -> int:
    _check_positive(args, "period_months")
    _check_jobs(args)
    prices = _prices(args)
    pl = _power_law(args)
    try:
        repo = load_repository(args.repo, args.period_months)
    except (OSError, RepositoryFormatError) as exc:
        raise FlagError("--repo", str(exc)) from None
    plans = decide_repository(repo, prices, pl, include_cdn=args.cdn, jobs=args.jobs)
    write_plans_csv(plans, args.out)
    log.info("wrote %d plans to %s", len(plans), args.out)
    return 0


def cmd_experiment(args) -> int:
    if args.n < 1:
        raise FlagError("--n", f"must be >= 1, got {args.n}")
    if args.repetitions < 1:
        raise FlagError("--repetitions", f"must be >= 1, got {args.repetitions}")
    _check_positive(args, "period_months")
    _check_jobs(args)
    access = _access(args)
    prices = _prices(args)
    pl = _power_law(args)
    params = _synthesis_params(args, args.n)
    overrides = {}
    if args.shapes is not None:
        if not args.shapes or min(args.shapes) <= 0:
            raise FlagError("--shapes", "need one or more shapes > 0")
        overrides["shape_values"] = tuple(args.shapes)
    if args.multipliers is not None:
        if not args.multipliers or min(args.multipliers) < 1:
            raise FlagError("--multipliers", "need one or more multipliers >= 1")
        overrides["multipliers"] = tuple(args.multipliers)
    spec = ExperimentSpec(
        Mode(args.mode),
        repetitions=args.repetitions,
        n_videos=args.n,
        seed=args.seed,
        access=access,
        multiplier_shape=args.shape,
        **overrides,
    )
    report = run_experiment(spec, params, prices, pl, jobs=args.jobs)
    emit_report(report, args.out, args.format)
    log.info("wrote %s report to %s", spec.mode, args.out)
    return 0


def cmd_fit_time_model(args) -> int:
    try:
        fit = fit_time_model(read_calibration(args.samples))
    except OSError as exc:
        raise FlagError("samples", str(exc)) from None
    except CalibrationError as exc:
        raise FlagError("samples", str(exc)) from None
    text = f"slope = {fit.slope!r}\nintercept = {fit.intercept!r}\nr_squared = {fit.r_squared!r}\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def cmd_report(args) -> int:
    try:
        report = load_report(args.path)
    except (OSError, ValueError, KeyError) as exc:
        raise FlagError("path", str(exc)) from None
    print(format_report(report))
    return 0


COMMANDS = {
    "synthesize": cmd_synthesize,
    "decide": cmd_decide,
    "experiment": cmd_experiment,
    "fit-time-model": cmd_fit_time_model,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except FlagError as exc:
        print(f"vodcost: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
