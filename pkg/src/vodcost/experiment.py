"""Repository-scale cost experiments comparing the three strategies.

Every sweep point re-uses one synthesized GOP structure (same master seed),
and only the view assignment is redrawn per repetition. Repetition ``r``
uses the same views seed at every sweep point, so the Weibull draws for
different shapes are rank-identical and the pure-storage baseline is exactly
constant across a sweep.

Repository totals are computed by ``RepositoryCostModel``, which precomputes
per-video prefix/suffix sums once so that a 50,000-video repository can be
re-planned for a new view assignment in milliseconds. It produces the same
plans as ``decision.decide_video`` (checked in the test suite).
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .access import (
    PowerLawParams,
    ViewAssignment,
    WeibullParams,
    apply_view_multiplier,
    gop_view_denominators,
    sample_repository_views,
)
from .costs import MB_PER_GB, cost_ratio, storage_cost, transcode_cost
from .pricing import PriceBook
from .synthesis import SynthesisParams, synthesize_structure, views_seed
from .video import Repository

Z_95 = 1.96

STRATEGIES = ("fully_pre", "fully_re", "partial")
REPORT_HEADER = ("mode", "sweep_value", "strategy", "mean_cost", "ci_low", "ci_high", "cdn_included")


class Mode(str, Enum):
    FAV_SWEEP = "fav-sweep"
    FAV_SWEEP_CDN = "fav-sweep-cdn"
    VIEW_MULTIPLIER = "view-multiplier"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ExperimentSpec:
    mode: Mode
    shape_values: tuple[float, ...] = (0.4, 0.6, 1.0, 1.4, 1.8, 2.4)
    multipliers: tuple[float, ...] = (1, 2, 3, 4, 5)
    repetitions: int = 10
    n_videos: int = 50_000
    seed: int = 0
    access: WeibullParams = WeibullParams()
    multiplier_shape: float = 1.0  # 20% FAVs at the default cutoff

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "shape_values", tuple(float(s) for s in self.shape_values))
        object.__setattr__(self, "multipliers", tuple(float(k) for k in self.multipliers))
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.n_videos < 1:
            raise ValueError(f"n_videos must be >= 1, got {self.n_videos}")
        if not self.sweep_values:
            raise ValueError(f"{self.mode} needs a non-empty sweep")
        if self.mode is Mode.VIEW_MULTIPLIER and min(self.multipliers) < 1:
            raise ValueError("multipliers must be >= 1")

    @property
    def includes_cdn(self) -> bool:
        return self.mode is Mode.FAV_SWEEP_CDN

    @property
    def sweep_values(self) -> tuple[float, ...]:
        return self.multipliers if self.mode is Mode.VIEW_MULTIPLIER else self.shape_values


@dataclass(frozen=True)
class StrategyTotals:
    fully_pre: float
    fully_re: float
    partial: float

    def as_dict(self):
        return asdict(self)


class RepositoryCostModel:
    """Precomputed plan costs for a fixed GOP structure under any view counts.

    For a video with GOP storage costs ``cs``, single-run transcoding costs
    ``ct`` and power-law denominators ``d`` (``i**alpha``), the threshold
    scan cuts at GOP ``i`` when ``cs_i * d_i / ct_i > V``. With CDN billing
    the stored side also pays ``V / d_i * gb_i * cdn``, which turns the test
    into ``cs_i * d_i / (ct_i - gb_i * cdn) > V`` (always true when the
    delivery charge alone beats re-transcoding). Only running maxima
    ("records") of that break-even view count can be a first crossing, so
    each video keeps just its records and, per record, the prefix storage,
    suffix transcoding and prefix delivery sums.
    """

    def __init__(self, repo: Repository, prices: PriceBook, pl: PowerLawParams = PowerLawParams()):
        self.repo = repo
        self.prices = prices
        self.pl = pl
        self.n_videos = n = len(repo)
        period = repo.period_months
        self.video_storage = np.empty(n)  # whole-video storage cost
        self.video_transcode = np.empty(n)  # one whole-video transcoding run
        self.video_gb = np.empty(n)
        for j, v in enumerate(repo.videos):
            size = float(v.sizes_mb.sum())
            self.video_storage[j] = storage_cost(size, prices, period)
            self.video_transcode[j] = transcode_cost(float(v.transcode_seconds.sum()), prices)
            self.video_gb[j] = size / MB_PER_GB
        self._tables = {}

    def _build(self, include_cdn: bool) -> dict:
        prices, period, n = self.prices, self.repo.period_months, self.n_videos
        cdn_price = prices.cdn_per_gb if include_cdn else 0.0
        rec_vals, pre_s, suf_t, pre_gb = [], [], [], []
        counts = np.empty(n, dtype=np.int64)
        gop_storage = np.empty(n)
        gop_delivery = np.empty(n)
        for j, v in enumerate(self.repo.videos):
            d = gop_view_denominators(v.gop_count, self.pl)
            cs = storage_cost(v.sizes_mb, prices, period)
            ct = transcode_cost(v.transcode_seconds, prices)
            gb_w = v.sizes_mb / MB_PER_GB / d
            margin = ct - v.sizes_mb / MB_PER_GB * cdn_price
            with np.errstate(divide="ignore"):
                breakeven = np.where(margin > 0, cs * d / np.where(margin > 0, margin, 1.0), np.inf)
            running = np.maximum.accumulate(breakeven)
            is_rec = np.empty(breakeven.size, dtype=bool)
            is_rec[0] = True
            is_rec[1:] = breakeven[1:] > running[:-1]
            pos = np.flatnonzero(is_rec)
            cs_cum = np.concatenate(([0.0], np.cumsum(cs)))
            gb_cum = np.concatenate(([0.0], np.cumsum(gb_w)))
            t_w = ct / d
            t_suf = np.concatenate((np.cumsum(t_w[::-1])[::-1], [0.0]))
            cut = np.append(pos, v.gop_count)  # last entry: no crossing
            rec_vals.append(breakeven[pos])
            pre_s.append(cs_cum[cut])
            suf_t.append(t_suf[cut])
            pre_gb.append(gb_cum[cut])
            counts[j] = pos.size
            gop_storage[j] = cs_cum[-1]
            gop_delivery[j] = gb_cum[-1]
        seg_starts = np.concatenate(([0], np.cumsum(counts)[:-1])).astype(np.int64)
        return {
            "rec_vals": np.concatenate(rec_vals),
            "pre_s": np.concatenate(pre_s),
            "suf_t": np.concatenate(suf_t),
            "pre_gb": np.concatenate(pre_gb),
            "counts": counts,
            "seg_starts": seg_starts,
            "tab_starts": seg_starts + np.arange(n),
            "gop_storage": gop_storage,
            "gop_delivery": gop_delivery,
        }

    def _table(self, include_cdn: bool) -> dict:
        include_cdn = bool(include_cdn)
        if include_cdn not in self._tables:
            self._tables[include_cdn] = self._build(include_cdn)
        return self._tables[include_cdn]

    def _check(self, views) -> np.ndarray:
        views = np.asarray(views, dtype=np.float64)
        if views.shape != (self.n_videos,):
            raise ValueError(f"expected {self.n_videos} view counts, got shape {views.shape}")
        return views

    def baseline_totals(self, views, include_cdn: bool = False) -> tuple[float, float]:
        """(fully pre-transcoded, fully re-transcoded) repository totals."""
        views = self._check(views)
        pre = float(self.video_storage.sum())
        if include_cdn:
            pre += float((views * self.video_gb).sum()) * self.prices.cdn_per_gb
        return pre, float((views * self.video_transcode).sum())

    def plan_costs(self, views, include_cdn: bool = False) -> np.ndarray:
        """Per-video expected cost of the plan decide_video would produce."""
        views = self._check(views)
        if self.n_videos == 0:
            return np.empty(0)
        t = self._table(include_cdn)
        rep = np.repeat(views, t["counts"])
        below = np.add.reduceat((t["rec_vals"] <= rep).astype(np.int64), t["seg_starts"])
        idx = t["tab_starts"] + below
        storage = t["pre_s"][idx]
        transcode = views * t["suf_t"][idx]
        gb = views * t["pre_gb"][idx]
        whole_side = self.video_storage
        if include_cdn:
            whole_side = whole_side + views * self.video_gb * self.prices.cdn_per_gb
        whole = cost_ratio(whole_side, self.video_transcode, views) <= 1.0
        storage = np.where(whole, t["gop_storage"], storage)
        transcode = np.where(whole, 0.0, transcode)
        gb = np.where(whole, views * t["gop_delivery"], gb)
        cost = storage + transcode
        if include_cdn:
            cost = cost + gb * self.prices.cdn_per_gb
        return np.where(views > 0, cost, 0.0)

    def totals(self, views, include_cdn: bool = False) -> StrategyTotals:
        pre, re = self.baseline_totals(views, include_cdn)
        return StrategyTotals(pre, re, float(self.plan_costs(views, include_cdn).sum()))


@dataclass(frozen=True)
class ReportRow:
    sweep_value: float
    strategy: str
    mean_cost: float
    ci_low: float
    ci_high: float
    cdn_included: bool


@dataclass
class CostReport:
    mode: Mode
    rows: list[ReportRow] = field(default_factory=list)
    # sweep value -> mean fraction of FAVs over repetitions (not written to CSV)
    fav_fraction: dict[float, float] = field(default_factory=dict)

    def row(self, sweep_value: float, strategy: str) -> ReportRow:
        for r in self.rows:
            if r.sweep_value == sweep_value and r.strategy == strategy:
                return r
        raise KeyError((sweep_value, strategy))

    def mean(self, sweep_value: float, strategy: str) -> float:
        return self.row(sweep_value, strategy).mean_cost

    @property
    def sweep_values(self) -> list[float]:
        return list(dict.fromkeys(r.sweep_value for r in self.rows))

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "rows": [asdict(r) for r in self.rows],
            "fav_fraction": [[k, v] for k, v in self.fav_fraction.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CostReport":
        return cls(
            Mode(data["mode"]),
            [ReportRow(**r) for r in data["rows"]],
            {float(k): float(v) for k, v in data.get("fav_fraction", [])},
        )


def mean_ci(samples) -> tuple[float, float, float]:
    """Mean and symmetric normal-approximation 95% interval (1.96 s / sqrt(r))."""
    x = np.asarray(samples, dtype=np.float64)
    mean = float(x.mean())
    half = Z_95 * float(x.std(ddof=1)) / math.sqrt(x.size) if x.size > 1 else 0.0
    return mean, mean - half, mean + half


def _views_for(spec: ExperimentSpec, sweep_value: float, repetition: int) -> ViewAssignment:
    seed = views_seed(spec.seed, repetition)
    if spec.mode is Mode.VIEW_MULTIPLIER:
        base = sample_repository_views(spec.n_videos, replace(spec.access, shape=spec.multiplier_shape), seed)
        return apply_view_multiplier(base, sweep_value)
    return sample_repository_views(spec.n_videos, replace(spec.access, shape=sweep_value), seed)


def run_experiment(
    spec: ExperimentSpec,
    params: SynthesisParams,
    prices: PriceBook = PriceBook(),
    pl: PowerLawParams = PowerLawParams(),
    jobs: int = 1,
) -> CostReport:
    structure = synthesize_structure(replace(params, n_videos=spec.n_videos), spec.seed)
    model = RepositoryCostModel(structure, prices, pl)
    cdn = spec.includes_cdn

    def evaluate(task):
        value, rep = task
        views = _views_for(spec, value, rep)
        return model.totals(views.views, cdn), views.fav_fraction

    tasks = [(value, rep) for value in spec.sweep_values for rep in range(spec.repetitions)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate, tasks))
    else:
        results = [evaluate(t) for t in tasks]

    report = CostReport(spec.mode)
    r = spec.repetitions
    for s, value in enumerate(spec.sweep_values):
        chunk = results[s * r : (s + 1) * r]
        report.fav_fraction[value] = float(np.mean([f for _, f in chunk]))
        for strategy in STRATEGIES:
            mean, lo, hi = mean_ci([getattr(t, strategy) for t, _ in chunk])
            report.rows.append(
                ReportRow(value, strategy, mean, lo, hi, cdn and strategy != "fully_re")
            )
    return report


def emit_report(report: CostReport, path: str | Path, format: str = "csv") -> None:
    path = Path(path)
    if format == "json":
        path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
        return
    if format != "csv":
        raise ValueError(f"unknown report format {format!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for r in report.rows:
            writer.writerow(
                [
                    report.mode.value,
                    repr(r.sweep_value),
                    r.strategy,
                    repr(r.mean_cost),
                    repr(r.ci_low),
                    repr(r.ci_high),
                    "true" if r.cdn_included else "false",
                ]
            )


def load_report(path: str | Path) -> CostReport:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return CostReport.from_dict(json.loads(text))
    rows = list(csv.DictReader(text.splitlines()))
    if not rows:
        raise ValueError(f"{path}: empty report")
    report = CostReport(Mode(rows[0]["mode"]))
    for row in rows:
        report.rows.append(
            ReportRow(
                float(row["sweep_value"]),
                row["strategy"],
                float(row["mean_cost"]),
                float(row["ci_low"]),
                float(row["ci_high"]),
                row["cdn_included"] == "true",
            )
        )
    return report


def format_report(report: CostReport) -> str:
    label = "multiplier" if report.mode is Mode.VIEW_MULTIPLIER else "shape"
    lines = [f"{report.mode.value}", f"{label:>10} {'FAV%':>6}  " + "  ".join(f"{s:>24}" for s in STRATEGIES)]
    for value in report.sweep_values:
        fav = report.fav_fraction.get(value)
        cells = []
        for s in STRATEGIES:
            r = report.row(value, s)
            cells.append(f"{r.mean_cost:>12.2f} ±{(r.ci_high - r.ci_low) / 2:>10.2f}")
        fav_text = f"{100 * fav:6.1f}" if fav is not None else "     -"
        lines.append(f"{value:>10g} {fav_text}  " + "  ".join(cells))
    return "\n".join(lines)
