"""Long-tail popularity: Weibull shape controls the share of frequently accessed videos.

Run: python demos/03_popularity.py
"""
import math

from vodcost import WeibullParams, apply_view_multiplier, sample_repository_views

for shape in (0.4, 0.6, 1.0, 1.4, 1.8, 2.4):
    views = sample_repository_views(50_000, WeibullParams(shape=shape), seed=1)
    print(
        f"shape {shape:>3}: FAVs {100 * views.fav_fraction:5.2f}% "
        f"(tail {100 * math.exp(-1.6**shape):5.2f}%), mean views {views.views.mean():.2f}, "
        f"max {views.views.max()}"
    )

# FAVs get k times the views, the rest 1/k of them (rounded half up)
base = sample_repository_views(12, WeibullParams(), seed=5)
print("\nFAV:", "".join("  *" if fav else "  ." for _, fav in base))
print("k=1:", "".join(f"{int(x):3d}" for x, _ in base))
print("k=3:", "".join(f"{int(x):3d}" for x, _ in apply_view_multiplier(base, 3)))
