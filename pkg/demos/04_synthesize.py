"""Build a synthetic repository from Gaussian GOP statistics and save it to disk.

Run: python demos/04_synthesize.py
"""
import tempfile
from pathlib import Path

import numpy as np

from vodcost import SynthesisParams, WeibullParams, fit_time_model, load_repository, save_repository
from vodcost.synthesis import read_calibration, reference_calibration_path, synthesize_repository

# the time model maps GOP size to transcode seconds; fit it from timing samples
fit = fit_time_model(read_calibration(reference_calibration_path()))
print(f"fitted: seconds = {fit.slope:.3f} * MB + {fit.intercept:.3f}  (r2 {fit.r_squared:.3f})")

params = SynthesisParams(time_model_slope=fit.slope, time_model_intercept=fit.intercept, n_videos=2000)
repo = synthesize_repository(params, WeibullParams(shape=1.0), seed=7)

sizes_kb = np.concatenate([v.sizes_mb for v in repo]) * 1024
counts = np.array([v.gop_count for v in repo])
print(f"{len(repo)} videos, GOP size {sizes_kb.mean():.1f} KB (sd {sizes_kb.std():.1f}), "
      f"{counts.mean():.1f} GOPs per video")
print(f"total {sizes_kb.sum() / 1024**3:.3f} TiB, {sum(v.views_last_period for v in repo)} views")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "repo.csv"
    save_repository(repo, path)
    print(f"saved {path.stat().st_size / 1e6:.1f} MB;", "round trip ok:", load_repository(path) == repo)
