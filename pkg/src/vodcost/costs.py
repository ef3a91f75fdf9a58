"""Storage, transcoding and CDN cost formulas.

All functions accept scalars or numpy arrays. Sizes are in MB and converted
to GB with a factor of 2**10.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pricing import PriceBook

MB_PER_GB = 2**10
SECONDS_PER_HOUR = 3600.0

#: ratio returned when the re-transcoding cost is zero; compares greater than 1,
#: so callers treat it as "do not store"
UNDEFINED_RATIO = math.inf


@dataclass(frozen=True)
class CostBreakdown:
    storage: float = 0.0
    transcode: float = 0.0
    cdn: float = 0.0

    def __post_init__(self):
        for name in ("storage", "transcode", "cdn"):
            value = getattr(self, name)
            if not value >= 0:
                raise ValueError(f"{name} cost must be >= 0, got {value}")
            object.__setattr__(self, name, float(value))

    @property
    def total(self) -> float:
        return self.storage + self.transcode + self.cdn

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown(
            self.storage + other.storage, self.transcode + other.transcode, self.cdn + other.cdn
        )


def _as_value(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_nonneg(x, what):
    if np.any(np.asarray(x) < 0):
        raise ValueError(f"{what} must be >= 0")


def storage_cost(size_mb, prices: PriceBook, period_months: float = 1.0):
    """Cost of keeping ``size_mb`` in storage for ``period_months``."""
    _check_nonneg(size_mb, "size_mb")
    size = np.asarray(size_mb, dtype=np.float64)
    return _as_value(size * prices.storage_per_gb_month / MB_PER_GB * period_months)


def transcode_cost(tau_seconds, prices: PriceBook):
    """Cost of one transcoding run taking ``tau_seconds`` of VM time (prorated per second).

    Re-transcoding on every view costs ``views * transcode_cost(...)``.
    """
    _check_nonneg(tau_seconds, "tau_seconds")
    tau = np.asarray(tau_seconds, dtype=np.float64)
    return _as_value(prices.transcode_per_hour * tau / SECONDS_PER_HOUR)


def cost_ratio(storage, transcode_once, views):
    """storage / (views * transcode_once); ``UNDEFINED_RATIO`` where the denominator is 0.

    A ratio <= 1 means keeping the transcoded copy is no dearer than
    re-transcoding for every view.
    """
    storage = np.asarray(storage, dtype=np.float64)
    denom = np.asarray(views, dtype=np.float64) * np.asarray(transcode_once, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom > 0, storage / np.where(denom > 0, denom, 1.0), UNDEFINED_RATIO)
    return _as_value(ratio)


def cdn_cost(delivered_gb, prices: PriceBook):
    """Delivery charge for ``delivered_gb`` streamed out of storage.

    Only stored (pre-transcoded) content is delivered through the CDN;
    on-demand transcoded output is not charged.
    """
    _check_nonneg(delivered_gb, "delivered_gb")
    return _as_value(np.asarray(delivered_gb, dtype=np.float64) * prices.cdn_per_gb)


def delivered_gb(size_mb, views):
    """GB streamed when ``size_mb`` of stored content is watched ``views`` times."""
    return _as_value(np.asarray(views, dtype=np.float64) * np.asarray(size_mb, dtype=np.float64) / MB_PER_GB)
