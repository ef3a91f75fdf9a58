import json

import numpy as np
import pytest

from conftest import random_video
from vodcost.access import PowerLawParams, WeibullParams, sample_repository_views
from vodcost.decision import baseline_costs, decide_repository
from vodcost.experiment import (
    REPORT_HEADER,
    ExperimentSpec,
    Mode,
    RepositoryCostModel,
    emit_report,
    format_report,
    load_report,
    mean_ci,
    run_experiment,
)
from vodcost.pricing import PriceBook
from vodcost.synthesis import SynthesisParams, synthesize_structure
from vodcost.video import Repository

P = PriceBook()
PL = PowerLawParams()


@pytest.fixture(scope="module")
def small_structure():
    return synthesize_structure(SynthesisParams.reference(n_videos=150), 21)


@pytest.mark.parametrize("include_cdn", [False, True])
@pytest.mark.parametrize("shape", [0.4, 1.0, 2.4])
def test_cost_model_matches_per_video_planner(small_structure, shape, include_cdn):
    """Vectorised totals agree with decide_repository + baseline_costs."""
    model = RepositoryCostModel(small_structure, P, PL)
    views = sample_repository_views(len(small_structure), WeibullParams(shape=shape), 4).views
    # widen the range so every branch (zero, partial, fully stored) appears
    views = views * np.random.default_rng(1).integers(1, 40, views.size)
    repo = small_structure.with_views(views)
    plans = decide_repository(repo, P, PL, include_cdn=include_cdn)
    per_video = model.plan_costs(views, include_cdn)
    expected = np.array([p.projected_cost.total for p in plans])
    np.testing.assert_allclose(per_video, expected, rtol=1e-9, atol=1e-15)
    pre, re = model.baseline_totals(views, include_cdn)
    base = [baseline_costs(v, P, include_cdn) for v in repo]
    assert pre == pytest.approx(sum(b["FullyPre"].total for b in base), rel=1e-12)
    assert re == pytest.approx(sum(b["FullyRe"].total for b in base), rel=1e-12)


@pytest.mark.parametrize("include_cdn", [False, True])
def test_cost_model_matches_planner_on_ragged_videos(include_cdn):
    # lognormal sizes/times make partial plans common, unlike synthesized videos
    rng = np.random.default_rng(8)
    structure = Repository(tuple(random_video(rng, views=0, id=f"r{j}") for j in range(400)))
    model = RepositoryCostModel(structure, P, PL)
    seen = set()
    for trial in range(5):
        views = rng.geometric(0.08, len(structure)) - 1
        plans = decide_repository(structure.with_views(views), P, PL, include_cdn=include_cdn)
        seen |= {p.kind.value for p in plans}
        expected = np.array([p.projected_cost.total for p in plans])
        np.testing.assert_allclose(model.plan_costs(views, include_cdn), expected, rtol=1e-9, atol=1e-15)
    assert seen == {"FullyPre", "FullyRe", "Partial"}


def test_mean_ci():
    mean, lo, hi = mean_ci([1.0, 2.0, 3.0, 4.0])
    half = 1.96 * np.std([1, 2, 3, 4], ddof=1) / 2
    assert mean == 2.5 and lo == pytest.approx(2.5 - half) and hi == pytest.approx(2.5 + half)
    assert mean_ci([5.0]) == (5.0, 5.0, 5.0)


@pytest.fixture(scope="module")
def small_reports():
    params = SynthesisParams.reference()
    out = {}
    for mode in Mode:
        spec = ExperimentSpec(mode, repetitions=3, n_videos=300, seed=3)
        out[mode] = run_experiment(spec, params, P, PL)
    return out


def test_report_shape(small_reports):
    rep = small_reports[Mode.FAV_SWEEP]
    assert len(rep.rows) == 18
    assert rep.sweep_values == [0.4, 0.6, 1.0, 1.4, 1.8, 2.4]
    assert len(small_reports[Mode.VIEW_MULTIPLIER].rows) == 15
    for r in rep.rows:
        assert r.mean_cost >= 0 and r.ci_high - r.ci_low >= 0


def test_partial_never_above_baselines(small_reports):
    for rep in small_reports.values():
        for value in rep.sweep_values:
            best = min(rep.mean(value, "fully_pre"), rep.mean(value, "fully_re"))
            assert rep.mean(value, "partial") <= best + 1e-6


def test_fully_pre_constant_across_shapes(small_reports):
    rep = small_reports[Mode.FAV_SWEEP]
    values = {rep.mean(v, "fully_pre") for v in rep.sweep_values}
    assert len(values) == 1


def test_cdn_flags(small_reports):
    rep = small_reports[Mode.FAV_SWEEP_CDN]
    for r in rep.rows:
        assert r.cdn_included == (r.strategy != "fully_re")
    assert not any(r.cdn_included for r in small_reports[Mode.FAV_SWEEP].rows)


def test_csv_report(tmp_path, small_reports):
    rep = small_reports[Mode.FAV_SWEEP_CDN]
    path = tmp_path / "r.csv"
    emit_report(rep, path, "csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(REPORT_HEADER)
    assert len(lines) == 19
    back = load_report(path)
    assert back.rows == rep.rows and back.mode is rep.mode


def test_json_round_trip(tmp_path, small_reports):
    rep = small_reports[Mode.VIEW_MULTIPLIER]
    path = tmp_path / "r.json"
    emit_report(rep, path, "json")
    back = load_report(path)
    assert back == rep
    assert json.loads(path.read_text())["mode"] == "view-multiplier"


def test_emit_errors(tmp_path, small_reports):
    with pytest.raises(ValueError):
        emit_report(small_reports[Mode.FAV_SWEEP], tmp_path / "x", "xml")
    with pytest.raises(OSError):
        emit_report(small_reports[Mode.FAV_SWEEP], tmp_path / "missing" / "x.csv")


def test_reports_are_deterministic(tmp_path):
    spec = ExperimentSpec(Mode.FAV_SWEEP, repetitions=2, n_videos=50, seed=9)
    params = SynthesisParams.reference()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_report(run_experiment(spec, params), a)
    emit_report(run_experiment(spec, params, jobs=3), b)
    assert a.read_bytes() == b.read_bytes()


def test_format_report(small_reports):
    text = format_report(small_reports[Mode.FAV_SWEEP])
    assert "fully_pre" in text and text.count("\n") == 7


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec(Mode.FAV_SWEEP, repetitions=0)
    with pytest.raises(ValueError):
        ExperimentSpec(Mode.FAV_SWEEP, shape_values=())
    with pytest.raises(ValueError):
        ExperimentSpec(Mode.VIEW_MULTIPLIER, multipliers=(0.5,))
    assert ExperimentSpec("fav-sweep-cdn").includes_cdn
