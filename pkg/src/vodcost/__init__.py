"""Cost-driven pre-transcode / re-transcode planning for video-on-demand repositories."""

__version__ = "0.1.0"

from .access import (
    PowerLawParams,
    ViewAssignment,
    WeibullParams,
    apply_view_multiplier,
    gop_views,
    sample_repository_views,
)
from .costs import CostBreakdown, cdn_cost, cost_ratio, delivered_gb, storage_cost, transcode_cost
from .decision import (
    PlanKind,
    TranscodingPlan,
    baseline_costs,
    decide_partial,
    decide_repository,
    decide_video,
    oracle_per_gop,
    plan_cost,
)
from .experiment import CostReport, ExperimentSpec, Mode, emit_report, format_report, load_report, run_experiment
from .pricing import PriceBook, load_price_book
from .synthesis import SynthesisParams, fit_time_model, synthesize_repository
from .video import GopMeta, Repository, VideoMeta, load_repository, save_repository, video_size_mb, video_transcode_seconds
