import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from vodcost.costs import (
    UNDEFINED_RATIO,
    CostBreakdown,
    cdn_cost,
    cost_ratio,
    delivered_gb,
    storage_cost,
    transcode_cost,
)
from vodcost.pricing import PriceBook

P = PriceBook()


def test_storage_examples():
    assert math.isclose(storage_cost(1024, P), 0.03, rel_tol=1e-12)
    assert storage_cost(0, P) == 0
    # one mean GOP: 655.08 KB = 0.639727 MB
    assert math.isclose(storage_cost(655.08 / 1024, P), 1.8742e-5, rel_tol=1e-4)


def test_storage_scales_with_period():
    assert math.isclose(storage_cost(1024, P, 3), 0.09)


def test_transcode_examples():
    assert math.isclose(transcode_cost(3600, P), 0.026, rel_tol=1e-12)
    assert transcode_cost(0, P) == 0
    assert math.isclose(transcode_cost(1, P), 0.026 / 3600, rel_tol=1e-12)
    assert math.isclose(transcode_cost(1, P), 7.2222e-6, rel_tol=1e-4)


def test_negative_inputs_rejected():
    for fn in (lambda: storage_cost(-1, P), lambda: transcode_cost(-1, P), lambda: cdn_cost(-0.1, P)):
        with pytest.raises(ValueError):
            fn()


def test_ratio_examples():
    assert math.isclose(cost_ratio(0.03, 0.026, 2), 0.03 / 0.052)
    assert math.isclose(cost_ratio(0.03, 0.026, 2), 0.5769, rel_tol=1e-4)
    assert cost_ratio(0.03, 0.026, 0) == UNDEFINED_RATIO
    assert cost_ratio(1, 1, 1) == 1.0
    assert cost_ratio(1.0, 0.0, 5) == UNDEFINED_RATIO
    assert cost_ratio(1, 1, 1) <= 1


def test_ratio_arrays():
    r = cost_ratio(np.array([1.0, 1.0]), np.array([1.0, 0.0]), np.array([2.0, 2.0]))
    assert r.tolist() == [0.5, math.inf]


def test_cdn_examples():
    assert math.isclose(cdn_cost(1, P), 0.085)
    assert cdn_cost(0, P) == 0
    # 2 GB video streamed 3 times from storage
    assert math.isclose(cdn_cost(delivered_gb(2 * 1024, 3), P), 0.51)


pos = st.floats(0, 1e6, allow_nan=False, allow_infinity=False)


@given(pos, pos)
def test_linearity(a, b):
    assert math.isclose(storage_cost(a + b, P), storage_cost(a, P) + storage_cost(b, P), rel_tol=1e-9, abs_tol=1e-300)
    assert math.isclose(
        transcode_cost(a + b, P), transcode_cost(a, P) + transcode_cost(b, P), rel_tol=1e-9, abs_tol=1e-300
    )


@given(st.floats(1e-6, 1e3), st.floats(1e-6, 1e3), st.floats(0.01, 1e4), st.floats(0.01, 100))
def test_ratio_scale_invariant(s, t, v, k):
    assert math.isclose(cost_ratio(s * k, t * k, v), cost_ratio(s, t, v), rel_tol=1e-12)


@given(st.floats(1e-6, 1e3), st.floats(1e-6, 1e3), st.floats(0.01, 1e4), st.floats(0.01, 1e4))
def test_ratio_decreases_with_views(s, t, v1, v2):
    assume(v1 < v2 and v2 / v1 > 1 + 1e-9)
    assert cost_ratio(s, t, v2) < cost_ratio(s, t, v1)


def test_breakdown():
    c = CostBreakdown(1.0, 2.0, 0.5)
    assert c.total == 3.5
    assert (c + c).total == 7.0
    with pytest.raises(ValueError):
        CostBreakdown(-1.0)
