"""Randomised invariants over model parameters."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sysdep.error_analysis import assess_signs, monotone_ratio, relative_error_curve
from sysdep.models import from_dict, independent_counterpart
from sysdep.systems import EvalGrid, Func, SystemSpec, evaluate

GRID = EvalGrid.make(0.05, 5, 25)
rate = st.floats(0.05, 3.0)
shape = st.floats(0.4, 3.0)
settings.register_profile("sysdep", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("sysdep")


@st.composite
def mome2(draw):
    return from_dict({"family": "MOME", "n": 2,
                      "rates": {"1": draw(rate), "2": draw(rate), "1,2": draw(st.floats(0.0, 3.0))}})


@st.composite
def fgmw2(draw):
    g = draw(st.floats(-0.95, 0.95).filter(lambda x: abs(x) > 1e-3))
    return from_dict({"family": "FGMW", "n": 2, "lambdas": [draw(rate), draw(rate)],
                      "alphas": [draw(shape), draw(shape)], "gamma": g})


@st.composite
def lee2(draw):
    return from_dict({"family": "Lee", "n": 2, "rates": {"1": draw(rate), "2": draw(rate), "1,2": draw(rate)},
                      "alpha": draw(shape), "scales": [draw(st.floats(0.3, 3.0)), draw(st.floats(0.3, 3.0))]})


models = st.one_of(mome2(), fgmw2(), lee2())
points = st.lists(st.floats(0.0, 4.0), min_size=2, max_size=2)


@given(models, points, points)
def test_joint_sf_is_nonincreasing(m, a, b):
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    assert m.log_joint_sf(hi) <= m.log_joint_sf(lo) + 1e-14


@given(models)
def test_sf_error_at_least_minus_one_and_prefix_rule(m):
    rep = assess_signs(relative_error_curve(m, "series", "paper-literal", GRID))
    assert rep.bound("sf_error_at_least_minus_one")
    assert rep.bound("hazard_prefix_rule")


@given(models, st.sampled_from(["series", "parallel"]))
def test_parallel_dominates_series_and_counterpart_is_independent(m, structure):
    t = GRID.t
    ser = evaluate(SystemSpec.dependent(m, "series"), Func.SF, t)[0]
    par = evaluate(SystemSpec.dependent(m, "parallel"), Func.SF, t)[0]
    assert np.all(par >= ser * (1 - 1e-12))
    ind = independent_counterpart(m, "true-marginal")
    assert ind.is_independent and ind.n == m.n


@given(mome2())
def test_mome_dependence_overstates_series_survival(m):
    # shared shocks never hurt a series system relative to true marginals
    c = relative_error_curve(m, "series", "true-marginal", GRID)
    assert np.all(c["sf"] >= -1e-12)


@given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0.2, 4))
def test_monotone_ratio_sign_follows_rate_order(beta, gamma, theta):
    t = np.geomspace(0.01, 10, 30)
    h = monotone_ratio(beta, gamma, theta, t, log=True)
    d = np.diff(h)
    if beta > gamma * (1 + 1e-9):
        assert np.all(d >= -1e-12)
    elif gamma > beta * (1 + 1e-9):
        assert np.all(d <= 1e-12)
