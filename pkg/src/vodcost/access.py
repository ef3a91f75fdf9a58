"""View models: power-law decay across the GOPs of one video, Weibull long tail across videos."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class PowerLawParams:
    alpha_gop: float = 0.1

    def __post_init__(self):
        if not self.alpha_gop >= 0:
            raise ValueError(f"alpha_gop must be >= 0, got {self.alpha_gop}")


VIEW_SCALINGS = ("reference", "empirical")


@dataclass(frozen=True)
class WeibullParams:
    """Repository popularity model.

    Raw samples ``x ~ scale * Weibull(shape)``. A video is a FAV when its raw
    sample exceeds ``fav_cutoff``. Raw samples become view counts by a linear
    factor chosen by ``view_scaling``:

    ``"reference"``
        factor = target_mean_views / E[x at reference_shape]. The factor is
        the same for every shape, so heavier tails (smaller shape) carry more
        total views. With the defaults views are simply ``1.99 * x`` and the
        mean is 1.99 at shape 1.
    ``"empirical"``
        factor = target_mean_views / mean(x) of this draw, so every draw
        averages ``target_mean_views`` regardless of shape.
    """

    shape: float = 1.0
    scale: float = 1.0
    target_mean_views: float = 1.99
    fav_cutoff: float = 1.6
    view_scaling: str = "reference"
    reference_shape: float = 1.0

    def __post_init__(self):
        for name in ("shape", "scale", "target_mean_views", "fav_cutoff", "reference_shape"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite number > 0, got {value}")
        if self.view_scaling not in VIEW_SCALINGS:
            raise ValueError(f"view_scaling must be one of {VIEW_SCALINGS}, got {self.view_scaling!r}")

    def expected_fav_fraction(self) -> float:
        return math.exp(-((self.fav_cutoff / self.scale) ** self.shape))


def round_half_up(x):
    """Round to the nearest integer, halves away from zero for x >= 0 (numpy rounds halves to even)."""
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5).astype(np.int64)


def gop_views(views, i, params: PowerLawParams = PowerLawParams()):
    """Expected views of GOP ``i`` (1-based) given ``views`` of the whole video: V / i**alpha.

    Works elementwise on arrays; real-valued, never rounded.
    """
    i_arr = np.asarray(i, dtype=np.float64)
    if np.any(i_arr < 1):
        raise ValueError(f"GOP ordinal must be >= 1, got {i}")
    out = np.asarray(views, dtype=np.float64) / i_arr ** params.alpha_gop
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=4096)
def _denominators(m: int, alpha: float) -> np.ndarray:
    d = np.arange(1, m + 1, dtype=np.float64) ** alpha
    d.flags.writeable = False
    return d


def gop_view_denominators(m: int, params: PowerLawParams = PowerLawParams()) -> np.ndarray:
    """i**alpha for i = 1..m (read-only, cached per (m, alpha))."""
    return _denominators(int(m), float(params.alpha_gop))


def expected_gop_views(views: float, m: int, params: PowerLawParams = PowerLawParams()) -> np.ndarray:
    """gop_views for every GOP of an m-GOP video."""
    return float(views) / gop_view_denominators(m, params)


@dataclass(frozen=True, eq=False)
class ViewAssignment:
    """Per-video (views, is_fav) pairs, array backed. Iterates as tuples."""

    views: np.ndarray
    is_fav: np.ndarray

    def __post_init__(self):
        views = np.asarray(self.views, dtype=np.int64)
        fav = np.asarray(self.is_fav, dtype=bool)
        if views.shape != fav.shape or views.ndim != 1:
            raise ValueError("views and is_fav must be equal-length 1-d arrays")
        if np.any(views < 0):
            raise ValueError("views must be non-negative")
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "is_fav", fav)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, bool]]) -> "ViewAssignment":
        pairs = list(pairs)
        return cls(
            np.array([p[0] for p in pairs], dtype=np.int64),
            np.array([bool(p[1]) for p in pairs], dtype=bool),
        )

    def __len__(self):
        return self.views.size

    def __iter__(self) -> Iterator[tuple[int, bool]]:
        return zip(self.views.tolist(), self.is_fav.tolist())

    def __eq__(self, other):
        if not isinstance(other, ViewAssignment):
            return NotImplemented
        return np.array_equal(self.views, other.views) and np.array_equal(self.is_fav, other.is_fav)

    __hash__ = None

    @property
    def fav_fraction(self) -> float:
        return float(self.is_fav.mean()) if self.is_fav.size else 0.0


def _view_factor(params: WeibullParams, raw: np.ndarray) -> float:
    if params.view_scaling == "empirical":
        return params.target_mean_views / float(raw.mean())
    reference_mean = params.scale * math.gamma(1.0 + 1.0 / params.reference_shape)
    return params.target_mean_views / reference_mean


def sample_raw_popularity(n_videos: int, params: WeibullParams, seed) -> np.ndarray:
    # Generator.weibull raises standard exponentials to 1/shape, so one seed
    # gives rank-identical draws for every shape (common random numbers).
    if n_videos < 1:
        raise ValueError(f"n_videos must be >= 1, got {n_videos}")
    rng = np.random.default_rng(seed)
    return params.scale * rng.weibull(params.shape, size=n_videos)


def sample_repository_views(n_videos: int, params: WeibullParams, seed) -> ViewAssignment:
    raw = sample_raw_popularity(n_videos, params, seed)
    views = round_half_up(raw * _view_factor(params, raw))
    return ViewAssignment(views, raw > params.fav_cutoff)


def apply_view_multiplier(assignments, k: float) -> ViewAssignment:
    """Multiply FAV views by ``k`` and divide the rest by ``k``, rounding half up."""
    if not k >= 1:
        raise ValueError(f"view multiplier must be >= 1, got {k}")
    if not isinstance(assignments, ViewAssignment):
        assignments = ViewAssignment.from_pairs(assignments)
    views = assignments.views.astype(np.float64)
    scaled = np.where(assignments.is_fav, views * k, views / k)
    return ViewAssignment(round_half_up(scaled), assignments.is_fav.copy())
