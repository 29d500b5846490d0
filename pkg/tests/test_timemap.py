import math

import numpy as np
import pytest

from germflow import (
    FieldSpec,
    Integrand,
    LogCoord,
    RangeExceeded,
    SGenSpec,
    TimeMapCache,
    field_from_s,
    integrate,
)
from germflow.fields import time_density

from conftest import E


def test_linear_closed_forms(linear):
    tm = TimeMapCache(linear)  # base = delta = e^-3
    assert tm.tau(LogCoord(-3.0)) == 0.0
    assert tm.tau(LogCoord(-5.0)) == pytest.approx(2.0, abs=1e-12)
    assert tm.tau_inv(2.0).z == pytest.approx(-5.0, abs=1e-9)
    for t in (0.5, 1.0, 3.0):
        p = LogCoord(-5.0)
        assert tm.flow(t, p).x == pytest.approx(math.exp(-t) * p.x, rel=1e-12)
        assert tm.flow_derivative(t, p) == pytest.approx(math.exp(-t), rel=1e-12)


def test_xalpha_tau_closed_form(xalpha1):
    # antiderivative -ln x - ln|ln x| from base e^-3
    tm = TimeMapCache(xalpha1)
    t_star = (E**2 - 3.0) - (2.0 - math.log(3.0))
    assert tm.tau(LogCoord(-(E**2))) == pytest.approx(t_star, abs=1e-9)
    assert tm.tau_inv(t_star).z == pytest.approx(-(E**2), abs=1e-8)


def test_roundtrip_inverse(xalpha1):
    tm = TimeMapCache(xalpha1)
    z = np.linspace(-3.2, -60.0, 100)
    t = tm.tau_z(z)
    back = tm.tau_inv_z(t)
    assert np.max(np.abs(back - z)) < 1e-9


def test_group_law_small_grid(xalpha1):
    tm = TimeMapCache(xalpha1)
    z = np.linspace(-8.0, -30.0, 12)
    for s in (-1.0, 0.3, 1.0, 2.0):
        for t in (-1.0, 0.3, 1.0, 2.0):
            za = tm.flow_z(s + t, z)
            zb = tm.flow_z(s, tm.flow_z(t, z))
            assert np.max(np.abs(np.exp(za - zb) - 1.0)) < 1e-8


def test_flow_time_consistency(xalpha1):
    # tau(f^t(x)) - tau(x) = t, and the integral of 1/X across the hop is t
    tm = TimeMapCache(xalpha1)
    p = LogCoord(-5.0)
    q = tm.flow(1.0, p)
    assert tm.tau(q) - tm.tau(p) == pytest.approx(1.0, abs=1e-8)
    # int_x^{f^t(x)} dy/X = t; with bounds ordered q < p the engine returns -t
    r = integrate(
        Integrand(lambda z: time_density(xalpha1, z), "z"), q, p, tol=1e-12
    )
    assert -r.value == pytest.approx(1.0, abs=1e-8)


def test_contraction_monotonicity(xalpha1):
    tm = TimeMapCache(xalpha1)
    z = np.linspace(-3.5, -40.0, 30)
    assert np.all(tm.flow_z(1.0, z) < z)
    zs, taus = tm.table()
    assert np.all(np.diff(zs) < 0)
    assert np.all(np.diff(taus) > 0)


def test_derivative_cocycle(xalpha1):
    tm = TimeMapCache(xalpha1)
    z = np.linspace(-6.0, -25.0, 9)
    for s in (-0.7, 0.5, 1.5):
        for t in (-0.5, 0.8, 2.0):
            left = tm.flow_derivative_z(s + t, z)
            right = tm.flow_derivative_z(s, tm.flow_z(t, z)) * tm.flow_derivative_z(t, z)
            assert np.max(np.abs(left / right - 1.0)) < 1e-7


def test_derivative_matches_fd(xalpha1):
    tm = TimeMapCache(xalpha1)
    z = np.linspace(-5.0, -20.0, 8)
    h = 1e-6
    for t in (0.5, 2.0):
        df = tm.flow_derivative_z(t, z)
        dzf = (tm.flow_z(t, z + h) - tm.flow_z(t, z - h)) / (2 * h)
        fd = np.exp(tm.flow_z(t, z) - z) * dzf
        assert np.max(np.abs(fd / df - 1.0)) < 1e-5


def test_derivative_limit_near_origin():
    spec = FieldSpec("xalpha", alpha=2.0)
    tm = TimeMapCache(spec)
    got = tm.flow_derivative(1.0, LogCoord(-1e3))
    assert abs(got - math.exp(-1.0)) < 1e-3


def test_cache_certification(xalpha1):
    # tabulated tau vs a direct quadrature of the density
    tm = TimeMapCache(xalpha1)
    for z in (-3.7, -11.3, -137.2, -(E**3) * 1.017):
        # tau(x) = int_b^x dy/X = -(integral over [x, b] in increasing order)
        direct = -integrate(
            Integrand(lambda zz: time_density(xalpha1, zz), "z"),
            LogCoord(z),
            LogCoord(xalpha1.z_delta),
        ).value
        cached = tm.tau(LogCoord(z))
        assert abs(cached - direct) <= 1e-9 * (1.0 + abs(cached))


def test_range_errors(xalpha1):
    tm = TimeMapCache(xalpha1, w_cap=8.0)
    with pytest.raises(RangeExceeded):
        tm.flow(-2.0, LogCoord(-3.05))  # exits above delta
    with pytest.raises(RangeExceeded):
        tm.flow(4000.0, LogCoord(-5.0))  # deeper than w_cap = 8
    with pytest.raises(RangeExceeded):
        tm.tau(LogCoord(-2.0))  # above the base point
    with pytest.raises(RangeExceeded):
        TimeMapCache(xalpha1, base=LogCoord(-2.0))


def test_freeze_blocks_extension(xalpha1):
    tm = TimeMapCache(xalpha1)
    tm.tau(LogCoord(-50.0))
    tm.freeze()
    tm.tau(LogCoord(-49.0))  # already covered: fine
    with pytest.raises(RangeExceeded):
        tm.tau(LogCoord(-(E**9)))


def test_custom_base():
    spec = FieldSpec("linear")
    tm = TimeMapCache(spec, base=LogCoord(-4.0))
    assert tm.tau(LogCoord(-4.0)) == 0.0
    assert tm.tau(LogCoord(-6.5)) == pytest.approx(2.5, abs=1e-12)


def test_deep_flow_for_sgen():
    # relative solve stays accurate where tau itself is astronomically large
    spec = field_from_s(SGenSpec(1.0))
    tm = TimeMapCache(spec)
    z = np.array([-math.exp(30.0)])
    zf = tm.flow_z(2.0, z)
    # the z-shift is ~ |lam| * t * (1 + O(u)) with u ~ e^-30
    assert abs((z[0] - zf[0]) - 2.0) < 1e-8
    assert tm.flow_derivative_z(2.0, z)[0] == pytest.approx(math.exp(-2.0), rel=1e-6)
