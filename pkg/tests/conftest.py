import numpy as np
import pytest
from hypothesis import strategies as st

from vodcost.video import VideoMeta

# Lines collected by test_acceptance.py, printed once at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_video(sizes_mb, seconds, views=0, id="v"):
    return VideoMeta(id, np.asarray(sizes_mb, dtype=float), np.asarray(seconds, dtype=float), views)


@st.composite
def videos(draw, max_gops=40, max_views=500):
    m = draw(st.integers(1, max_gops))
    pos = st.floats(0.01, 5.0, allow_nan=False, allow_infinity=False)
    sizes = draw(st.lists(pos, min_size=m, max_size=m))
    times = draw(st.lists(st.floats(0.001, 20.0), min_size=m, max_size=m))
    views = draw(st.one_of(st.just(0), st.just(1), st.integers(0, max_views)))
    return make_video(sizes, times, views)


def random_video(rng, views=None, max_gops=60, id="v"):
    """A video with ragged sizes/times, occasionally a single GOP or zero views."""
    m = 1 if rng.random() < 0.1 else int(rng.integers(1, max_gops + 1))
    sizes = rng.lognormal(np.log(0.6), 0.8, m)
    times = rng.lognormal(0.0, 0.8, m)
    if views is None:
        views = 0 if rng.random() < 0.1 else int(rng.geometric(0.05))
    return make_video(sizes, times, views, id)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
