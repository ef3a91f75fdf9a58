"""Plan a single video: fully pre-transcoded, fully on demand, or a stored prefix.

Run: python demos/02_decide_one_video.py
"""
import numpy as np

from vodcost import PowerLawParams, PriceBook, VideoMeta, baseline_costs, decide_video, oracle_per_gop

prices = PriceBook()
pl = PowerLawParams(alpha_gop=0.1)  # viewers drop off along the video as 1 / i**0.1

rng = np.random.default_rng(3)
sizes = rng.uniform(0.3, 1.0, 600)
seconds = 1.2 * sizes + 0.275

# plans are costed with per-GOP expected views, the baselines with V full views,
# which is why an on-demand plan undercuts the on-demand baseline
for views in (0, 1, 2, 5, 40):
    v = VideoMeta("clip", sizes, seconds, views)
    plan = decide_video(v, prices, pl)
    base = baseline_costs(v, prices)
    _, best = oracle_per_gop(v, prices, pl)
    print(
        f"V={views:>2}: {plan.kind.value:<9} threshold={plan.gop_threshold}  "
        f"plan ${plan.projected_cost.total:.5f}  "
        f"pre ${base['FullyPre'].total:.5f}  re ${base['FullyRe'].total:.5f}  per-GOP best ${best:.5f}"
    )

# a video whose opening GOPs are expensive to transcode but cheap to keep
v = VideoMeta("trailer", [0.1, 0.1, 5, 5, 5], [10, 10, 0.1, 0.1, 0.1], 1)
plan = decide_video(v, prices, pl)
print(f"\n{v.id}: {plan.kind.value}, store GOPs 1..{plan.stored_gops}, {plan.stored_mb} MB kept")
