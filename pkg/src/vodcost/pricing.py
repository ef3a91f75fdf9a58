"""Cloud unit prices and the flat key/value price configuration format.

A price file looks like::

    # AWS-style prices, USD
    transcode_per_hour = 0.026
    storage_per_gb_month = 0.03
    cdn_per_gb = 0.085

Keys that are left out fall back to the defaults below.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from pathlib import Path

DEFAULT_TRANSCODE_PER_HOUR = 0.026  # t2-small VM, $/hour
DEFAULT_STORAGE_PER_GB_MONTH = 0.03  # S3, $/GB/month
DEFAULT_CDN_PER_GB = 0.085  # CloudFront first 10 TB tier, $/GB

PRICE_KEYS = ("transcode_per_hour", "storage_per_gb_month", "cdn_per_gb")


class PriceConfigError(ValueError):
    """Raised for a malformed or invalid price document."""

    def __init__(self, key: str | None, message: str):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


@dataclass(frozen=True)
class PriceBook:
    """Unit prices in US dollars. Immutable, safe to share between workers."""

    transcode_per_hour: float = DEFAULT_TRANSCODE_PER_HOUR
    storage_per_gb_month: float = DEFAULT_STORAGE_PER_GB_MONTH
    cdn_per_gb: float = DEFAULT_CDN_PER_GB

    def __post_init__(self):
        for key in PRICE_KEYS:
            value = getattr(self, key)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise PriceConfigError(key, f"expected a number, got {value!r}")
            if not math.isfinite(value):
                raise PriceConfigError(key, "price must be finite")
            if value < 0:
                raise PriceConfigError(key, f"price must be >= 0, got {value}")
            object.__setattr__(self, key, float(value))

    def scaled(self, factor: float) -> "PriceBook":
        """Same book with the storage and transcoding prices multiplied by `factor`."""
        return PriceBook(
            self.transcode_per_hour * factor,
            self.storage_per_gb_month * factor,
            self.cdn_per_gb,
        )


def load_price_book(source: str | None = None) -> PriceBook:
    """Parse a price document. ``None`` or blank text gives the default book."""
    values: dict[str, float] = {}
    if source:
        for lineno, raw in enumerate(source.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            sep = "=" if "=" in line else ":" if ":" in line else None
            if sep is None:
                raise PriceConfigError(line, f"line {lineno}: expected 'key = value'")
            key, _, text = line.partition(sep)
            key = key.strip().strip('"')
            if key not in PRICE_KEYS:
                raise PriceConfigError(key, f"line {lineno}: unknown price key")
            if key in values:
                raise PriceConfigError(key, f"line {lineno}: duplicate key")
            try:
                values[key] = float(text.strip().strip('"'))
            except ValueError:
                raise PriceConfigError(key, f"line {lineno}: not a number: {text.strip()!r}") from None
    return PriceBook(**values)


def read_price_book(path: str | Path | None) -> PriceBook:
    if path is None:
        return PriceBook()
    return load_price_book(Path(path).read_text(encoding="utf-8"))


def dump_price_book(prices: PriceBook) -> str:
    # repr keeps full float precision so a reload is exact
    return "".join(f"{k} = {v!r}\n" for k, v in asdict(prices).items())
