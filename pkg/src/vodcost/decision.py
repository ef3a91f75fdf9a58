"""Per-video store / re-transcode planning.

``decide_video`` compares whole-video storage against re-transcoding on every
view. When storing the whole video is too expensive it falls back to
``decide_partial``, which walks the GOPs from the start and cuts at the first
GOP whose storage cost exceeds its expected re-transcoding cost. Everything
before the cut is stored, everything from the cut on is re-transcoded on
demand.

``oracle_per_gop`` picks the cheaper option for every GOP independently. It is
a lower bound on any plan under the same model and is used to check the
threshold scan.
"""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .access import PowerLawParams, expected_gop_views, gop_view_denominators
from .costs import (
    CostBreakdown,
    cdn_cost,
    cost_ratio,
    delivered_gb,
    storage_cost,
    transcode_cost,
)
from .pricing import PriceBook
from .video import Repository, VideoMeta, video_size_mb, video_transcode_seconds

_FIRST_CHUNK = 16


class PlanKind(str, Enum):
    FULLY_PRE = "FullyPre"
    FULLY_RE = "FullyRe"
    PARTIAL = "Partial"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TranscodingPlan:
    video_id: str
    kind: PlanKind
    gop_count: int
    gop_threshold: int | None = None
    stored_mb: float = 0.0
    projected_cost: CostBreakdown = CostBreakdown()

    def __post_init__(self):
        if self.kind is PlanKind.PARTIAL:
            if self.gop_threshold is None or not 2 <= self.gop_threshold <= self.gop_count:
                raise ValueError(
                    f"partial plan for {self.video_id} needs 2 <= gop_threshold <= {self.gop_count}, "
                    f"got {self.gop_threshold}"
                )
        elif self.gop_threshold is not None:
            raise ValueError(f"{self.kind} plan must not carry a gop_threshold")

    @property
    def stored_gops(self) -> int:
        """Number of leading GOPs kept in storage."""
        if self.kind is PlanKind.FULLY_PRE:
            return self.gop_count
        if self.kind is PlanKind.FULLY_RE:
            return 0
        return self.gop_threshold - 1


def _gop_costs(v: VideoMeta, prices: PriceBook, pl: PowerLawParams, period_months: float):
    """Per-GOP storage cost, expected views, and expected re-transcoding cost."""
    cs = storage_cost(v.sizes_mb, prices, period_months)
    ct = transcode_cost(v.transcode_seconds, prices)
    p = expected_gop_views(v.views_last_period, v.gop_count, pl)
    return cs, p, p * ct


def _make_plan(v, kind, threshold, prices, pl, period_months, include_cdn):
    if kind is PlanKind.FULLY_PRE:
        stored = v.gop_count
    elif kind is PlanKind.FULLY_RE:
        stored = 0
    else:
        stored = threshold - 1
    plan = TranscodingPlan(
        v.id, kind, v.gop_count, threshold, float(v.sizes_mb[:stored].sum())
    )
    cost = plan_cost(v, plan, prices, pl, include_cdn, period_months)
    return TranscodingPlan(v.id, kind, v.gop_count, threshold, plan.stored_mb, cost)


def _stored_side(cs, p, sizes_mb, prices, include_cdn):
    """Cost of keeping GOPs stored: storage, plus delivering their expected views when CDN is billed."""
    if not include_cdn:
        return cs
    return cs + cdn_cost(delivered_gb(sizes_mb, p), prices)


def find_gop_threshold(
    v: VideoMeta,
    prices: PriceBook,
    pl: PowerLawParams = PowerLawParams(),
    period_months: float = 1.0,
    include_cdn: bool = False,
    on_chunk=None,
) -> int | None:
    """First 1-based GOP index whose cost ratio exceeds 1, or None.

    GOPs are evaluated front to back in doubling chunks and the scan stops
    with the chunk holding the first crossing, so no GOP is evaluated twice
    and long stored prefixes cost O(m). ``on_chunk(start, stop)`` is called
    for every evaluated 0-based slice.
    """
    m = v.gop_count
    views = v.views_last_period
    start, chunk = 0, _FIRST_CHUNK
    while start < m:
        stop = min(m, start + chunk)
        if on_chunk is not None:
            on_chunk(start, stop)
        p = float(views) / gop_view_denominators(m, pl)[start:stop]
        sizes = v.sizes_mb[start:stop]
        cs = _stored_side(storage_cost(sizes, prices, period_months), p, sizes, prices, include_cdn)
        ct = transcode_cost(v.transcode_seconds[start:stop], prices)
        hits = np.flatnonzero(cost_ratio(cs, ct, p) > 1.0)
        if hits.size:
            return start + int(hits[0]) + 1
        start, chunk = stop, chunk * 2
    return None


def decide_partial(
    v: VideoMeta,
    prices: PriceBook,
    pl: PowerLawParams = PowerLawParams(),
    period_months: float = 1.0,
    include_cdn: bool = False,
) -> TranscodingPlan:
    threshold = find_gop_threshold(v, prices, pl, period_months, include_cdn)
    if threshold is None:
        return _make_plan(v, PlanKind.FULLY_PRE, None, prices, pl, period_months, include_cdn)
    if threshold == 1:
        return _make_plan(v, PlanKind.FULLY_RE, None, prices, pl, period_months, include_cdn)
    return _make_plan(v, PlanKind.PARTIAL, threshold, prices, pl, period_months, include_cdn)


def decide_video(
    v: VideoMeta,
    prices: PriceBook,
    pl: PowerLawParams = PowerLawParams(),
    period_months: float = 1.0,
    include_cdn: bool = False,
) -> TranscodingPlan:
    """Plan one video.

    With ``include_cdn`` the delivery charge of stored content is added to the
    storage side of every cost ratio, and to the projected cost.
    """
    views = v.views_last_period
    if views == 0:
        # unwatched last period: transcode lazily when it is requested
        return _make_plan(v, PlanKind.FULLY_RE, None, prices, pl, period_months, include_cdn)
    size = video_size_mb(v)
    c_s = storage_cost(size, prices, period_months)
    if include_cdn:
        c_s += cdn_cost(delivered_gb(size, views), prices)
    c_t = transcode_cost(video_transcode_seconds(v), prices)
    if cost_ratio(c_s, c_t, views) <= 1.0:
        return _make_plan(v, PlanKind.FULLY_PRE, None, prices, pl, period_months, include_cdn)
    return decide_partial(v, prices, pl, period_months, include_cdn)


def plan_cost(
    v: VideoMeta,
    plan: TranscodingPlan,
    prices: PriceBook,
    pl: PowerLawParams = PowerLawParams(),
    include_cdn: bool = False,
    period_months: float = 1.0,
) -> CostBreakdown:
    """Expected cost of ``plan`` for one period.

    Stored GOPs pay storage (and CDN delivery of their expected views);
    re-transcoded GOPs pay one transcoding run per expected view.
    """
    if plan.video_id != v.id or plan.gop_count != v.gop_count:
        raise ValueError(
            f"plan for {plan.video_id!r} ({plan.gop_count} GOPs) does not match "
            f"video {v.id!r} ({v.gop_count} GOPs)"
        )
    cs, p, pct = _gop_costs(v, prices, pl, period_months)
    k = plan.stored_gops
    cdn = 0.0
    if include_cdn and k:
        cdn = cdn_cost(float(delivered_gb(v.sizes_mb[:k], p[:k]).sum()), prices)
    return CostBreakdown(float(cs[:k].sum()), float(pct[k:].sum()), cdn)


def baseline_costs(
    v: VideoMeta,
    prices: PriceBook,
    include_cdn: bool = False,
    period_months: float = 1.0,
) -> dict[PlanKind, CostBreakdown]:
    """Costs of the two whole-video strategies that ignore GOP-level access.

    Fully pre-transcoding stores the whole video, and with CDN every view
    streams the whole stored copy. Fully re-transcoding transcodes the whole
    video once per view.
    """
    size = video_size_mb(v)
    views = v.views_last_period
    cdn = cdn_cost(delivered_gb(size, views), prices) if include_cdn else 0.0
    return {
        PlanKind.FULLY_PRE: CostBreakdown(storage_cost(size, prices, period_months), 0.0, cdn),
        PlanKind.FULLY_RE: CostBreakdown(
            0.0, views * transcode_cost(video_transcode_seconds(v), prices), 0.0
        ),
    }


def oracle_per_gop(
    v: VideoMeta,
    prices: PriceBook,
    pl: PowerLawParams = PowerLawParams(),
    period_months: float = 1.0,
    include_cdn: bool = False,
) -> tuple[np.ndarray, float]:
    """Brute-force per-GOP optimum: (store mask, minimal expected cost)."""
    cs, p, pct = _gop_costs(v, prices, pl, period_months)
    cs = _stored_side(cs, p, v.sizes_mb, prices, include_cdn)
    store = cs <= pct
    return store, float(cs[store].sum()) + float(pct[~store].sum())


def decide_repository(
    repo: Repository,
    prices: PriceBook,
    pl: PowerLawParams = PowerLawParams(),
    include_cdn: bool = False,
    jobs: int = 1,
) -> list[TranscodingPlan]:
    """One plan per video, in repository order."""

    def one(v):
        return decide_video(v, prices, pl, repo.period_months, include_cdn)

    if jobs > 1 and len(repo) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, repo.videos))
    return [one(v) for v in repo.videos]


PLAN_CSV_HEADER = (
    "video_id",
    "kind",
    "gop_threshold",
    "stored_mb",
    "storage_cost",
    "transcode_cost",
    "cdn_cost",
    "total_cost",
)


def write_plans_csv(plans, out) -> None:
    """Write plans to a path or text stream."""
    if not hasattr(out, "write"):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            return write_plans_csv(plans, fh)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PLAN_CSV_HEADER)
    for p in plans:
        c = p.projected_cost
        writer.writerow(
            [
                p.video_id,
                p.kind.value,
                "" if p.gop_threshold is None else p.gop_threshold,
                repr(p.stored_mb),
                repr(c.storage),
                repr(c.transcode),
                repr(c.cdn),
                repr(c.total),
            ]
        )


def read_plans_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
