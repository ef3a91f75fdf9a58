"""Repository-wide cost of the three strategies as FAVs and views grow.

A reduced version of the full sweep (n = 5,000, 3 repetitions) that runs in seconds.
Run: python demos/05_cost_sweep.py
"""
from vodcost import ExperimentSpec, Mode, SynthesisParams, format_report, run_experiment

params = SynthesisParams.reference()  # reference time model, see README

for mode in Mode:
    spec = ExperimentSpec(mode, repetitions=3, n_videos=5_000, seed=7)
    report = run_experiment(spec, params)
    print(format_report(report))
    print()
