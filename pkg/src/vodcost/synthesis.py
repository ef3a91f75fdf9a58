"""Synthetic video repositories and the GOP size -> transcoding time model.

GOP sizes and GOP counts are drawn from Gaussians truncated to their observed
[min, max] range by rejection (out-of-range draws are redrawn, not clamped).
Transcoding time is affine in GOP size: ``seconds = slope * size_mb + intercept``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

import numpy as np

from .access import WeibullParams, sample_repository_views
from .video import Repository, VideoMeta

KB_PER_MB = 1024.0

# Observed GOP statistics (sizes in KB; counts per video). The source table's row
# labels mix the two columns up (a "max GOP size" of 2018 is really the count
# maximum), so values are read by column: KB figures for size, integers for count.
GOP_SIZE_KB_MEAN = 655.08
GOP_SIZE_KB_STD = 201.44
GOP_SIZE_KB_MIN = 1.91
GOP_SIZE_KB_MAX = 2192.65
GOP_COUNT_MEAN = 1262.79
GOP_COUNT_STD = 271.46
GOP_COUNT_MIN = 580
GOP_COUNT_MAX = 2018

# Reference time model shipped with the package. The slope and intercept are
# not measured values: they are picked so that a mean-sized GOP (0.6397 MB)
# takes ~1.04 s, which puts whole-repository transcoding cost on the same
# order as storage cost at ~2 views per video. Calibrate your own with
# fit_time_model() for real planning.
REFERENCE_TIME_SLOPE = 1.2  # seconds per MB
REFERENCE_TIME_INTERCEPT = 0.275  # seconds

_MAX_REJECTION_ROUNDS = 10_000


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class SynthesisParams:
    """GOP statistics plus the affine time model. The time model has no default."""

    time_model_slope: float
    time_model_intercept: float
    n_videos: int = 50_000
    gop_size_kb_mean: float = GOP_SIZE_KB_MEAN
    gop_size_kb_std: float = GOP_SIZE_KB_STD
    gop_size_kb_min: float = GOP_SIZE_KB_MIN
    gop_size_kb_max: float = GOP_SIZE_KB_MAX
    gop_count_mean: float = GOP_COUNT_MEAN
    gop_count_std: float = GOP_COUNT_STD
    gop_count_min: int = GOP_COUNT_MIN
    gop_count_max: int = GOP_COUNT_MAX
    period_months: float = 1.0

    def __post_init__(self):
        if self.n_videos < 1:
            raise ValueError(f"n_videos must be >= 1, got {self.n_videos}")
        for label, lo, mean, hi, std in (
            ("gop_size_kb", self.gop_size_kb_min, self.gop_size_kb_mean, self.gop_size_kb_max, self.gop_size_kb_std),
            ("gop_count", self.gop_count_min, self.gop_count_mean, self.gop_count_max, self.gop_count_std),
        ):
            if not std >= 0:
                raise ValueError(f"{label}_std must be >= 0, got {std}")
            if not lo <= mean <= hi or (std > 0 and not lo < mean < hi):
                raise ValueError(f"{label}: need min < mean < max, got {lo}, {mean}, {hi}")
        if self.gop_size_kb_min <= 0:
            raise ValueError("gop_size_kb_min must be > 0")
        if self.gop_count_min < 1:
            raise ValueError("gop_count_min must be >= 1")
        lo = self.transcode_seconds(self.gop_size_kb_min / KB_PER_MB)
        hi = self.transcode_seconds(self.gop_size_kb_max / KB_PER_MB)
        if not (min(lo, hi) > 0 and math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(
                "time model must give positive transcode times over the GOP size range "
                f"(got {lo:.4g} s and {hi:.4g} s at the bounds)"
            )

    @classmethod
    def reference(cls, **overrides) -> "SynthesisParams":
        kwargs = dict(
            time_model_slope=REFERENCE_TIME_SLOPE, time_model_intercept=REFERENCE_TIME_INTERCEPT
        )
        kwargs.update(overrides)
        return cls(**kwargs)

    def transcode_seconds(self, size_mb):
        return self.time_model_slope * size_mb + self.time_model_intercept


def truncated_normal(rng: np.random.Generator, mean: float, std: float, lo: float, hi: float, size: int) -> np.ndarray:
    """Gaussian draws restricted to [lo, hi] by redrawing rejects."""
    if std == 0:
        return np.full(size, float(mean))
    out = rng.normal(mean, std, size)
    bad = np.flatnonzero((out < lo) | (out > hi))
    rounds = 0
    while bad.size:
        rounds += 1
        if rounds > _MAX_REJECTION_ROUNDS:
            raise RuntimeError(f"rejection sampler stuck: N({mean}, {std}) on [{lo}, {hi}]")
        out[bad] = rng.normal(mean, std, bad.size)
        bad = bad[(out[bad] < lo) | (out[bad] > hi)]
    return out


def _seed_sequence(seed) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def structure_seed(seed) -> np.random.SeedSequence:
    """Seed for GOP structure; independent of the one used for views."""
    root = _seed_sequence(seed)
    return np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (0,))


def views_seed(seed, repetition: int = 0) -> np.random.SeedSequence:
    root = _seed_sequence(seed)
    return np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (1, repetition))


def _video_structure(params: SynthesisParams, ss: np.random.SeedSequence):
    rng = np.random.default_rng(ss)
    count = truncated_normal(
        rng, params.gop_count_mean, params.gop_count_std, params.gop_count_min, params.gop_count_max, 1
    )[0]
    m = int(np.floor(count + 0.5))
    sizes_kb = truncated_normal(
        rng, params.gop_size_kb_mean, params.gop_size_kb_std, params.gop_size_kb_min, params.gop_size_kb_max, m
    )
    sizes_mb = sizes_kb / KB_PER_MB
    return sizes_mb, params.transcode_seconds(sizes_mb)


def synthesize_structure(params: SynthesisParams, seed) -> Repository:
    """Videos with GOP structure only (all views 0).

    Video ``j`` draws from the ``j``-th child of the structure seed, so a
    given seed always maps to the same video at the same index.
    """
    children = structure_seed(seed).spawn(params.n_videos)
    width = len(str(params.n_videos - 1))
    videos = []
    for j, ss in enumerate(children):
        sizes, times = _video_structure(params, ss)
        videos.append(VideoMeta(f"v{j:0{width}d}", sizes, times, 0))
    return Repository(tuple(videos), params.period_months)


def synthesize_repository(params: SynthesisParams, access: WeibullParams, seed) -> Repository:
    repo = synthesize_structure(params, seed)
    views = sample_repository_views(params.n_videos, access, views_seed(seed))
    return repo.with_views(views.views)


@dataclass(frozen=True)
class TimeModelFit:
    slope: float
    intercept: float
    r_squared: float

    def __iter__(self):
        return iter((self.slope, self.intercept, self.r_squared))


def fit_time_model(samples: Iterable[tuple[float, float]]) -> TimeModelFit:
    """Ordinary least squares fit of seconds against GOP size in MB."""
    data = np.asarray(list(samples), dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise CalibrationError("need at least two (size_mb, seconds) samples")
    x, y = data[:, 0], data[:, 1]
    if not np.all(np.isfinite(data)):
        raise CalibrationError("samples must be finite")
    dx = x - x.mean()
    sxx = float(dx @ dx)
    if sxx == 0:
        raise CalibrationError("all samples have the same size; slope is undetermined")
    dy = y - y.mean()
    slope = float(dx @ dy) / sxx
    intercept = float(y.mean() - slope * x.mean())
    syy = float(dy @ dy)
    resid = y - (slope * x + intercept)
    r_squared = 1.0 if syy == 0 else 1.0 - float(resid @ resid) / syy
    return TimeModelFit(slope, intercept, r_squared)


def read_calibration(path: str | Path) -> list[tuple[float, float]]:
    """Read a ``size_mb,seconds`` CSV (header optional)."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except (ValueError, IndexError):
                if lineno == 1 and not rows:
                    continue  # header
                raise CalibrationError(f"{path}:{lineno}: expected 'size_mb,seconds', got {row}") from None
    return rows


def reference_calibration_path() -> Path:
    return Path(str(resources.files("vodcost") / "data" / "reference_calibration.csv"))
