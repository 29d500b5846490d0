import math

import numpy as np
import pytest

from germflow import (
    DomainError,
    FieldSpec,
    LogCoord,
    NonConvergence,
    SGenSpec,
    VariationCurve,
    asymptote_fit,
    conjugacy_variation_curve,
    shat,
    shat_variation,
    tan_fixed_points,
    total_variation,
)
from germflow import _kernels as K
from germflow.fields import eval_Du, eval_u, field_from_s
from germflow.quadrature import integrate_1d


def _bisect_tan_root(k, iters=200):
    # independent oracle: bisection of cos(a) - sin(a)/a on (k pi, k pi + pi/2)
    f = lambda a: math.cos(a) - math.sin(a) / a
    lo, hi = k * math.pi + 1e-9, k * math.pi + math.pi / 2 - 1e-12
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(lo) * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def test_first_root():
    tfp = tan_fixed_points(1)
    assert tfp.a[0] == pytest.approx(4.4934094579090642, abs=1e-12)
    assert tfp.a[0] == pytest.approx(_bisect_tan_root(1), abs=1e-12)
    assert math.pi < tfp.a[0] < 1.5 * math.pi


def test_roots_against_bisection_oracle():
    tfp = tan_fixed_points(12)
    for k in (2, 5, 12):
        assert tfp.a[k - 1] == pytest.approx(_bisect_tan_root(k), abs=1e-11)


def test_root_brackets_and_residuals():
    tfp = tan_fixed_points(100)
    k = np.arange(1, 101)
    assert np.all(tfp.a > k * np.pi)
    assert np.all(tfp.a < k * np.pi + np.pi / 2)
    assert np.all(np.diff(tfp.a) > 0)
    assert np.max(np.abs(tfp.residual())) < 1e-10


def test_extremum_height_identity():
    # |shat(1/a_k)| = 1/sqrt(1 + a_k^2) to 1e-12
    tfp = tan_fixed_points(50)
    heights = np.abs(shat(1.0 / tfp.a))
    assert np.max(np.abs(heights - 1.0 / np.sqrt(1.0 + tfp.a**2))) < 1e-12


def test_root_asymptotics():
    tfp = tan_fixed_points(50)
    assert abs(tfp.a[49] - (50 * math.pi + math.pi / 2)) < 0.01


def test_root_count_matches_floor():
    # #{a_k <= A} = floor(A/pi + 1/2) within 1 for A >= 20
    tfp = tan_fixed_points(400)
    for A in (20.0, 57.3, 301.0, 1000.0):
        count = int(np.sum(tfp.a <= A))
        assert abs(count - math.floor(A / math.pi + 0.5)) <= 1


# --- generic total variation -----------------------------------------------------


def test_tv_monotone():
    tv = total_variation(lambda x: x**3, 0.0, 2.0)
    assert tv == pytest.approx(8.0, abs=1e-9)


def test_tv_sine():
    tv = total_variation(np.sin, 0.0, 2.0 * math.pi, refine_tol=1e-6)
    assert tv == pytest.approx(4.0, abs=1e-4)


def test_tv_shat_matches_extrema():
    tfp = tan_fixed_points(3)
    a1, a3 = tfp.a[0], tfp.a[2]
    grid_tv = total_variation(shat, 1.0 / a3, 1.0 / a1, refine_tol=1e-9)
    s = shat(1.0 / tfp.a)
    extrema_tv = abs(s[1] - s[2]) + abs(s[0] - s[1])
    assert grid_tv == pytest.approx(extrema_tv, abs=1e-6)


# --- variation of the reparametrized profile ---------------------------------------


def test_shat_variation_boundary_only():
    # A slightly above a_1: single interior extremum, two boundary pieces
    a1 = tan_fixed_points(1).a[0]
    A = a1 + 1e-3
    got = shat_variation(A)
    c = 1.0 / math.log(4.0)
    want = abs(shat(1.0 / a1) - shat(1.0 / A)) + abs(shat(c) - shat(1.0 / a1))
    assert got == pytest.approx(want, rel=1e-12)
    with pytest.raises(DomainError):
        shat_variation(1.0)


def test_shat_variation_matches_grid_tv():
    A = 50.0
    got = shat_variation(A)
    grid = total_variation(shat, 1.0 / A, 1.0 / math.log(4.0), refine_tol=1e-5)
    assert got == pytest.approx(grid, abs=1e-4)
    assert grid <= got + 1e-12  # the grid method is a lower bound


def test_shat_variation_equals_Ds_integral():
    # var(shat) over [1/A, 1/w(delta)] = int_eps^delta |Ds| dx, computed in w
    A = 37.0
    sg = SGenSpec(1.0)
    quad = integrate_1d(lambda w: np.abs(K.profile_lu(w)), sg.w_delta, A, tol=1e-11).value
    assert shat_variation(A) == pytest.approx(quad, abs=1e-9)


def test_shat_variation_log_count_asymptotic():
    # V(A) - (2/pi) ln K(A) stays bounded as A grows
    gaps = []
    for A in (1e2, 1e3, 1e4):
        K_A = math.floor(A / math.pi + 0.5)
        gaps.append(shat_variation(A) - (2.0 / math.pi) * math.log(K_A))
    assert max(gaps) - min(gaps) < 0.05
    assert all(abs(g) < 1.0 for g in gaps)


# --- asymptote fits -----------------------------------------------------------------


def test_fit_exact_synthetic():
    A = np.geomspace(10.0, 1e4, 16)
    curve = VariationCurve(A, 0.6366 * np.log(A) + 1.0)
    fit = asymptote_fit(curve)
    assert fit.slope == pytest.approx(0.6366, abs=1e-12)
    assert fit.intercept == pytest.approx(1.0, abs=1e-10)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_fit_needs_points():
    from germflow import InsufficientSamples

    A = np.geomspace(10.0, 100.0, 4)
    with pytest.raises(InsufficientSamples):
        asymptote_fit(VariationCurve(A, np.log(A)))


def test_shat_curve_slope():
    A = np.geomspace(1e2, 1e4, 24)
    curve = VariationCurve(A, np.array([shat_variation(a) for a in A]))
    fit = asymptote_fit(curve.upper_half())
    assert abs(fit.slope - 2.0 / math.pi) < 0.07
    assert fit.r2 >= 0.995


# --- conjugacy variation curves ------------------------------------------------------


def test_conj_curve_flat_for_equal_parameters():
    A = np.geomspace(50.0, 2e3, 12)
    curve = conjugacy_variation_curve(0.8, 0.8, A)
    assert np.max(np.abs(curve.values)) < 1e-10


def test_conj_curve_monotone():
    A = np.geomspace(20.0, 1e3, 12)
    curve = conjugacy_variation_curve(1.0, 0.0, A)
    assert np.all(np.diff(curve.values) >= 0.0)


def test_conj_curve_slopes():
    A = np.geomspace(1e2, 1e4, 24)
    c10 = conjugacy_variation_curve(1.0, 0.0, A)
    fit10 = asymptote_fit(c10.upper_half())
    assert abs(fit10.slope - 2.0 / math.pi) < 0.07
    c21 = conjugacy_variation_curve(1.5, 0.5, A)
    fit21 = asymptote_fit(c21.upper_half())
    assert abs(fit21.slope - fit10.slope) <= 0.1 * fit10.slope


def test_conj_curve_requires_grid_above_delta():
    with pytest.raises(DomainError):
        conjugacy_variation_curve(1.0, 0.0, np.array([0.5, 2.0, 4.0] + list(range(5, 14))))


def test_affine_density_kernel_vs_direct_decomposition():
    # independent reconstruction of the w-density from the scalar eval ops:
    # solve ln h_b(y) = ln h_a(x) for y, assemble x|D log DH| pointwise
    alpha, beta = 1.3, 0.4
    delta = math.exp(-4.0)
    sga = SGenSpec(alpha, delta=delta)
    sgb = SGenSpec(beta, delta=delta)
    for w in (1.7, 2.9, 4.2, 6.0):
        z = -math.exp(w)
        p = LogCoord(z)
        s_unit = -math.sin(w) / w
        target = z - alpha * s_unit
        zy = target
        for _ in range(60):
            wy = math.log(-zy)
            zy_new = target + beta * (-math.sin(wy) / wy)
            if abs(zy_new - zy) < 1e-15:
                zy = zy_new
                break
            zy = zy_new
        py = LogCoord(zy)
        ua, dua = eval_u(sga, p), eval_Du(sga, p)
        ub_, dub = eval_u(sgb, py), eval_Du(sgb, py)
        # affine derivative of h_g: -Ds_g + Du_g/(1+u_g), with Ds_g = -u_g/x
        A_a = ua / p.x + dua / (1.0 + ua)
        A_b = ub_ / py.x + dub / (1.0 + ub_)
        dh = math.exp(zy - z) * (1.0 + ua) / (1.0 + ub_)
        density = p.x * abs(A_a - A_b * dh) * p.L
        kernel = float(K.affine_derivative_density(np.array([w]), alpha, beta)[0])
        assert kernel == pytest.approx(density, rel=1e-8), w
