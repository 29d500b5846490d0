import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from germflow import (
    BudgetExceeded,
    FieldSpec,
    Integrand,
    InsufficientSamples,
    LogCoord,
    NonFiniteError,
    integrate,
    tail_sequence,
)
from germflow import _kernels as K
from germflow.fields import time_density_diff
from germflow.quadrature import TailSamples, integrate_1d

from conftest import E


def test_inverse_x_closed_form():
    # int of -1/x over [e^-5, e^-2] = -(ln b - ln a) = -3
    f = Integrand(lambda z: -np.exp(-z), coordinate="x")
    r = integrate(f, LogCoord(-5.0), LogCoord(-2.0))
    assert abs(r.value - (-3.0)) < 1e-10
    assert abs(r.value - (-3.0)) <= max(r.abs_error_estimate, 1e-10)


def test_time_difference_closed_form():
    # int (1/X_1 - 1/X_0) over [e^-e^2, e^-e]: antiderivative a*ln|ln x|
    fx = FieldSpec("xalpha", alpha=1.0)
    fy = FieldSpec("linear")
    f = Integrand(lambda z: time_density_diff(fx, fy, z), coordinate="z")
    r = integrate(f, LogCoord(-E**2), LogCoord(-E))
    assert abs(r.value - 1.0) < 1e-8


def test_du_self_consistency():
    # same integral at tol 1e-6 and 1e-8 agree within 1e-6
    alpha = 1.0

    def du_density(z):
        L = -z
        w = np.log(L)
        return alpha * K.profile_l2du(w) / (L * L) * np.exp(-z)

    f = Integrand(du_density, coordinate="x")
    a, b = LogCoord(-E**3), LogCoord(-E)
    r1 = integrate(f, a, b, tol=1e-6)
    r2 = integrate(f, a, b, tol=1e-8)
    assert abs(r1.value - r2.value) < 1e-6


def test_additivity():
    f = Integrand(lambda z: np.sin(z) / (-z), coordinate="z")
    a, c, b = LogCoord(-40.0), LogCoord(-9.5), LogCoord(-2.0)
    whole = integrate(f, a, b)
    parts = integrate(f, a, c), integrate(f, c, b)
    tol = whole.abs_error_estimate + parts[0].abs_error_estimate + parts[1].abs_error_estimate
    assert abs(parts[0].value + parts[1].value - whole.value) <= tol + 1e-12


def test_coordinate_consistency():
    # integrating g(z) as a z-density equals integrating g(ln x)/x in x
    g = lambda z: np.cos(z) * np.exp(z / 10.0)
    rz = integrate(Integrand(g, coordinate="z"), LogCoord(-7.0), LogCoord(-2.0))
    rx = integrate(
        Integrand(lambda z: g(z) * np.exp(-z), coordinate="x"), LogCoord(-7.0), LogCoord(-2.0)
    )
    assert rx.value == pytest.approx(rz.value, abs=1e-11)


def test_linearity():
    f = lambda z: np.sin(z)
    g = lambda z: 1.0 / (-z)
    a, b = LogCoord(-20.0), LogCoord(-3.0)
    tol = 1e-10
    combo = integrate(Integrand(lambda z: 2.5 * f(z) - 1.5 * g(z), "z"), a, b, tol=tol)
    rf = integrate(Integrand(f, "z"), a, b, tol=tol)
    rg = integrate(Integrand(g, "z"), a, b, tol=tol)
    assert abs(combo.value - (2.5 * rf.value - 1.5 * rg.value)) < 10 * tol


def test_zero_width_and_bad_bounds():
    f = Integrand(lambda z: np.ones_like(z), "z")
    assert integrate(f, LogCoord(-3.0), LogCoord(-3.0)).value == 0.0
    with pytest.raises(ValueError):
        integrate(f, LogCoord(-2.0), LogCoord(-3.0))


def test_nonfinite_detected():
    f = Integrand(lambda z: np.where(z < -10.0, np.nan, 1.0), "z")
    with pytest.raises(NonFiniteError):
        integrate(f, LogCoord(-20.0), LogCoord(-3.0))


def test_budget_exceeded():
    # rough everywhere: the rule must keep splitting, and the budget is tiny
    f = Integrand(lambda z: np.cos(1000.0 * z), "z")
    with pytest.raises(BudgetExceeded):
        integrate(f, LogCoord(-20.0), LogCoord(-3.0), tol=1e-14, max_evals=60)


def test_max_width_presplit():
    f = Integrand(lambda z: np.ones_like(z), "z")
    r = integrate(f, LogCoord(-5.0), LogCoord(-2.0), max_width=0.5)
    assert r.value == pytest.approx(3.0, abs=1e-13)
    assert r.evaluations >= 6 * 15


# --- tail sequences -----------------------------------------------------------


def test_tail_zero():
    f = Integrand(lambda z: np.zeros_like(z), "z")
    ts = tail_sequence(f, LogCoord(-4.0), 10.0, 16)
    assert np.all(ts.values == 0.0)


def test_tail_affine_slope():
    # (1/X_a - 1/X_b) with a-b = 0.3: values 0.3*(w_j - w(delta))
    fx = FieldSpec("xalpha", alpha=0.5)
    fy = FieldSpec("xalpha", alpha=0.2)
    delta = LogCoord(fx.z_delta)
    f = Integrand(lambda z: time_density_diff(fx, fy, z), "z")
    ts = tail_sequence(f, delta, delta.w + 40.0, 32)
    expect = 0.3 * (ts.w_grid - delta.w)
    assert np.max(np.abs(ts.values - expect)) < 1e-7
    slope = np.polyfit(ts.w_grid, ts.values, 1)[0]
    assert slope == pytest.approx(0.3, rel=1e-2)


def test_tail_oscillating_bounded():
    # (1/Xt_a - 1/Xt_b): values (a-b)(sin w_j - sin w(delta)), bounded by 2|a-b|
    a, b = 1.0, 0.4
    fx = FieldSpec("xtildealpha", alpha=a)
    fy = FieldSpec("xtildealpha", alpha=b)
    delta = LogCoord(fx.z_delta)
    f = Integrand(lambda z: time_density_diff(fx, fy, z), "z")
    ts = tail_sequence(f, delta, delta.w + 40.0, 48)
    expect = (a - b) * (np.sin(ts.w_grid) - math.sin(delta.w))
    assert np.max(np.abs(ts.values - expect)) < 1e-7
    assert np.max(np.abs(ts.values)) <= 2.0 * abs(a - b) + 1e-9
    # non-convergent: the last-quarter range stays of order a-b
    q4 = ts.values[-12:]
    assert q4.max() - q4.min() > 0.3 * abs(a - b)


def test_tail_requires_enough_samples():
    f = Integrand(lambda z: np.zeros_like(z), "z")
    with pytest.raises(InsufficientSamples):
        tail_sequence(f, LogCoord(-4.0), 10.0, 4)


def test_tail_samples_validation():
    with pytest.raises(ValueError):
        TailSamples(np.array([1.0, 1.0, 2.0]), np.array([0.0, 0.0, 0.0]))
    with pytest.raises(NonFiniteError):
        TailSamples(np.array([1.0, 2.0, 3.0]), np.array([0.0, np.inf, 0.0]))


@given(
    st.floats(min_value=-60.0, max_value=-30.0),
    st.floats(min_value=-20.0, max_value=-3.0),
    st.floats(min_value=0.1, max_value=0.9),
)
def test_additivity_property(za, zb, frac):
    f = Integrand(lambda z: np.cos(z / 3.0) + 0.1 * z, "z")
    zc = za + frac * (zb - za)
    whole = integrate(f, LogCoord(za), LogCoord(zb), tol=1e-11)
    p1 = integrate(f, LogCoord(za), LogCoord(zc), tol=1e-11)
    p2 = integrate(f, LogCoord(zc), LogCoord(zb), tol=1e-11)
    assert p1.value + p2.value == pytest.approx(whole.value, abs=5e-10)
