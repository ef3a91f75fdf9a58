"""Storage, transcoding and delivery costs for a single GOP and a whole video.

Run: python demos/01_cost_model.py
"""
import numpy as np

from vodcost import PriceBook, cdn_cost, cost_ratio, delivered_gb, storage_cost, transcode_cost

prices = PriceBook()  # on-demand defaults: $0.026/h, $0.03/GB-month, $0.085/GB out
print(prices)

# a mean-sized GOP (655.08 KB) that takes about a second to transcode
gop_mb = 655.08 / 1024
seconds = 1.04
cs = storage_cost(gop_mb, prices)
ct = transcode_cost(seconds, prices)
print(f"keep one GOP for a month: ${cs:.3e}")
print(f"transcode it once:        ${ct:.3e}")

# storage wins once the GOP is watched often enough
for views in (0, 1, 2, 3, 10):
    r = cost_ratio(cs, ct, views)
    verdict = "store" if r <= 1 else "transcode on demand"
    print(f"V={views:>3}  R={r:8.3f}  -> {verdict}")

# delivery is charged per GB streamed out of storage
sizes = np.full(1263, gop_mb)
print(f"one full view of a 1263-GOP video: ${cdn_cost(delivered_gb(sizes.sum(), 1), prices):.4f} of CDN")
