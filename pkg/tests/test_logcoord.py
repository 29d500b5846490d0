import math

import pytest
from hypothesis import given, strategies as st

from germflow import DomainError, LogCoord


def test_accessors():
    p = LogCoord(-math.e**2)
    assert p.L == math.e**2
    assert p.w == pytest.approx(2.0, abs=1e-15)
    assert p.v == pytest.approx(math.log(2.0), abs=1e-15)
    assert p.x == pytest.approx(math.exp(-math.e**2))


def test_from_x_roundtrip():
    p = LogCoord.from_x(0.01)
    assert p.z == pytest.approx(math.log(0.01))
    assert LogCoord.from_w(3.0).z == -math.exp(3.0)


def test_rejects_bad_points():
    with pytest.raises(DomainError):
        LogCoord(0.0)
    with pytest.raises(DomainError):
        LogCoord(1.5)
    with pytest.raises(DomainError):
        LogCoord(float("nan"))
    with pytest.raises(DomainError):
        LogCoord.from_x(1.2)
    with pytest.raises(DomainError):
        LogCoord.from_x(0.0)


def test_w_requires_deep_point():
    with pytest.raises(DomainError):
        _ = LogCoord(-0.5).w
    with pytest.raises(DomainError):
        _ = LogCoord(-1.5).v  # w = ln(1.5) < 1


@given(st.floats(min_value=-700.0, max_value=-1e-3))
def test_z_roundtrip(z):
    p = LogCoord(z)
    assert LogCoord.from_x(p.x).z == pytest.approx(z, rel=1e-12, abs=1e-12)


@given(st.floats(min_value=0.1, max_value=40.0))
def test_w_roundtrip(w):
    p = LogCoord.from_w(w)
    assert p.w == pytest.approx(w, rel=1e-14)
