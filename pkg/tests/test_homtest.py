import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from indist.core import OutOfRangeOverlap, OutOfRangeProbability
from indist.homtest import (
    DelayModel,
    DipCurveParams,
    InsufficientData,
    NonConvergence,
    NonPositiveWidth,
    bunching_to_overlap,
    dip_curve,
    fit_dip,
    gaussian_overlap,
    initial_guess,
    overlap_to_bunching,
)


def test_bunching_examples():
    assert bunching_to_overlap(0.5) == 0.0
    assert bunching_to_overlap(1.0) == 1.0
    assert bunching_to_overlap(0.913) == pytest.approx(0.826, abs=1e-12)


def test_bunching_below_half_clamps_with_flag():
    value, flag = bunching_to_overlap(0.45, with_flag=True)
    assert value == 0.0 and flag
    assert bunching_to_overlap(0.7, with_flag=True)[1] is False


def test_bunching_errors():
    with pytest.raises(OutOfRangeProbability):
        bunching_to_overlap(1.1)
    with pytest.raises(OutOfRangeOverlap):
        overlap_to_bunching(-0.1)


def test_overlap_to_bunching_examples():
    assert overlap_to_bunching(0.0) == 0.5
    assert overlap_to_bunching(1.0) == 1.0
    assert overlap_to_bunching(0.640) == pytest.approx(0.820)


@given(st.floats(0.0, 1.0, allow_nan=False))
def test_round_trip(r):
    assert bunching_to_overlap(overlap_to_bunching(r)) == pytest.approx(r, abs=1e-15)


def test_gaussian_examples():
    assert gaussian_overlap(DelayModel(1.0, 3.0, 0.0)) == 1.0
    assert gaussian_overlap(DelayModel(0.944, 2.0, 0.0)) == 0.944
    assert gaussian_overlap(DelayModel(1.0, 1.0, math.sqrt(2 * math.log(2)))) == pytest.approx(0.5)
    with pytest.raises(NonPositiveWidth):
        gaussian_overlap(DelayModel(1.0, 0.0, 0.1))


@given(
    st.floats(0.0, 1.0),
    st.floats(0.01, 10.0),
    st.floats(-5.0, 5.0, allow_nan=False),
    st.floats(0.0, 5.0, allow_nan=False),
)
def test_gaussian_even_monotone_bounded(v, w, t, extra):
    r = gaussian_overlap(DelayModel(v, w, t))
    assert 0.0 <= r <= v
    assert r == gaussian_overlap(DelayModel(v, w, -t))
    assert gaussian_overlap(DelayModel(v, w, abs(t) + extra)) <= r


def test_dip_curve_examples():
    assert dip_curve(DipCurveParams(1, 0, 1, 0, 1), 0.0) == 0.0
    assert dip_curve(DipCurveParams(1, 0, 0.5, 0, 1), 1e6) == pytest.approx(1.0)
    assert dip_curve(DipCurveParams(2, 0, 0.5, 0, 1), 1.0) == pytest.approx(2 * (1 - 0.5 / math.e))
    assert dip_curve(DipCurveParams(2, 0, 0.5, 0, 1), 1.0) == pytest.approx(1.6321, abs=1e-4)


def _scan(params, n=41, span=0.5):
    x = np.linspace(-span, span, n)
    return x, dip_curve(params, x)


def test_fit_exact_data_recovers_parameters():
    true = DipCurveParams(100.0, 0.0, 0.9, 0.0, 0.1)
    x, y = _scan(true)
    fit = fit_dip(list(zip(x, y)))
    got = fit.params.as_array()
    # relative error; B and x0 are zero so compare absolutely
    np.testing.assert_allclose(got[[0, 2, 4]], [100.0, 0.9, 0.1], rtol=1e-6)
    assert abs(got[1]) < 1e-6 and abs(got[3]) < 1e-6


def test_fit_exact_data_with_drift_and_offset():
    true = DipCurveParams(250.0, 0.3, 0.8, 0.05, 0.12)
    x, y = _scan(true, n=61)
    fit = fit_dip(list(zip(x, y)))
    np.testing.assert_allclose(fit.params.as_array(), true.as_array(), rtol=1e-6, atol=1e-9)


def test_fit_noisy_data_visibility_within_002():
    true = DipCurveParams(1000.0, 0.0, 0.9, 0.0, 0.1)
    rng = np.random.default_rng(5)
    for _ in range(20):
        x, y = _scan(true)
        y_noisy = y * (1 + 0.01 * rng.normal(size=y.size))
        pts = [(a, b, 0.01 * c) for a, b, c in zip(x, y_noisy, y)]
        fit = fit_dip(pts)
        assert abs(fit.params.V - 0.9) < 0.02
        assert fit.sigmas.V > 0


def test_fit_deterministic():
    x, y = _scan(DipCurveParams(50, 0, 0.7, 0.02, 0.15))
    pts = list(zip(x, np.round(y)))
    a, b = fit_dip(pts), fit_dip(pts)
    assert a.params == b.params
    assert np.array_equal(a.covariance, b.covariance)


def test_fit_insufficient_data():
    with pytest.raises(InsufficientData):
        fit_dip([(0, 1), (1, 2), (2, 3)])


def test_fit_iteration_cap():
    x, y = _scan(DipCurveParams(100, 0.0, 0.9, 0.0, 0.1))
    with pytest.raises(NonConvergence):
        fit_dip(list(zip(x, y * (1 + 0.05 * np.sin(40 * x)))), max_iter=1)


def test_initial_guess_rules():
    true = DipCurveParams(100.0, 0.0, 0.5, 0.1, 0.2)
    x = np.linspace(-1.9, 2.1, 201)
    y = dip_curve(true, x)
    A0, B0, V0, x00, s0 = initial_guess(x, y)
    assert B0 == 0.0
    assert x00 == pytest.approx(0.1, abs=0.02)
    assert A0 == pytest.approx(100.0, rel=1e-3)
    assert V0 == pytest.approx(0.5, abs=1e-3)
    assert s0 == pytest.approx(0.2, rel=0.02)
