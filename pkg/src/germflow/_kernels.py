"""Hot array kernels.

Every kernel works on float64 arrays in logarithmic coordinates and is pure
elementwise arithmetic, so the same body runs jitted (numba ``@njit``) or as
plain numpy; see ``germflow._accel``.

Coordinates (for a point 0 < x < 1):

    z = ln x   (< 0),   L = -z = |ln x|,   w = ln L,   v = ln w.

Each vector-field family is reduced to the pair ``(q, q')`` appearing in

    X(x) = lam * x / (1 + q(z)),        q' = dq/dz,

so that x/X = (1 + q)/lam and DX = lam * (1 + q - q') / (1 + q)^2.  q -> 0
toward the origin for every family, which keeps all pair computations
(log-ratios, time densities) cancellation-safe arbitrarily deep.

The profile-generated family uses the profile s(w) = -sin(w)/w; its induced
perturbation u = -x*Ds satisfies

    L * u        = uhat(w)   = sin(w)/w^2 - cos(w)/w,
    L^2 * du/dz  = ubreve(w) = sin(w)(w + 2 - w^2)/w^3 - cos(w)(w + 2)/w^2,

pure functions of w; kernels below expose those and their w-derivative, so
deep-tail integrals can be carried entirely in w where L = e^w would
overflow float64.
"""

import numpy as np

from ._accel import maybe_jit


def py_xalpha_qq(z, alpha):
    L = -z
    q = -alpha / L
    qp = -alpha / (L * L)
    return q, qp


def py_yalpha_qq(z, alpha):
    d = -z + alpha
    q = -alpha / d
    qp = -alpha / (d * d)
    return q, qp


def py_xbar_qq(z, alpha):
    L = -z
    w = np.log(L)
    q = -alpha / (L * w)
    qp = -alpha * (w + 1.0) / (L * L * w * w)
    return q, qp


def py_xbarbar_qq(z, alpha):
    L = -z
    w = np.log(L)
    v = np.log(w)
    q = -alpha / (L * w * v)
    qp = -alpha * (w * v + v + 1.0) / (L * L * w * w * v * v)
    return q, qp


def py_xtilde_qq(z, alpha):
    L = -z
    w = np.log(L)
    q = -alpha * np.cos(w) / L
    qp = -alpha * (np.sin(w) + np.cos(w)) / (L * L)
    return q, qp


def py_sgen_qq(z, alpha):
    L = -z
    w = np.log(L)
    sw = np.sin(w)
    cw = np.cos(w)
    uhat = sw / (w * w) - cw / w
    ubreve = sw * (w + 2.0 - w * w) / (w * w * w) - cw * (w + 2.0) / (w * w)
    return alpha * uhat / L, alpha * ubreve / (L * L)


def py_perturb_shift(z, alpha_lam):
    # additive (dq, dq') of the multiplier-preserving perturbation
    # x/X -> x/X - alpha/L applied to a base field with multiplier lam
    L = -z
    return -alpha_lam / L, -alpha_lam / (L * L)


def py_perturb_osc_shift(z, alpha_lam):
    # oscillating variant: x/X -> x/X - alpha*cos(w)/L
    L = -z
    w = np.log(L)
    return -alpha_lam * np.cos(w) / L, -alpha_lam * (np.sin(w) + np.cos(w)) / (L * L)


# --- profile family, pure functions of the double-log coordinate w ---


def py_profile_s(w):
    return -np.sin(w) / w


def py_profile_lu(w):
    # L * u
    return np.sin(w) / (w * w) - np.cos(w) / w


def py_profile_l2du(w):
    # L^2 * du/dz
    return np.sin(w) * (w + 2.0 - w * w) / (w * w * w) - np.cos(w) * (w + 2.0) / (w * w)


def py_profile_l2du_dw(w):
    # d/dw of py_profile_l2du
    w2 = w * w
    w3 = w2 * w
    w4 = w3 * w
    return np.cos(w) * (2.0 * w + 6.0 - w2) / w3 + np.sin(w) * (w3 + 3.0 * w2 - 2.0 * w - 6.0) / w4


def py_affine_derivative_density(w, alpha, beta):
    """w-density of the affine derivative of the cross-conjugacy.

    For H = h_beta^{-1} o h_alpha built from the profile family
    (h_g(x) = e^{-g*s(x)} x), returns  L * |D(log DH)|  evaluated at
    z = -e^w, i.e. the integrand of  int |D^2 H / DH| dx  after the
    substitution dx = -x L dw.  Exact up to float64; the e^{-w}
    corrections underflow gracefully deep in the tail.
    """
    sw = np.sin(w)
    cw = np.cos(w)
    s = -sw / w
    uh = sw / (w * w) - cw / w
    ub = sw * (w + 2.0 - w * w) / (w * w * w) - cw * (w + 2.0) / (w * w)
    ell = np.exp(-w)  # 1/L
    # image coordinate w_y = ln|ln H(x)| from z_y - beta*s(w_y) = z - alpha*s(w);
    # the iteration contracts like beta*|s'|*e^-w, so four sweeps are ample
    # even at the domain cap
    d = (beta - alpha) * s
    for _ in range(4):
        wy = w + np.log1p(-d * ell)
        d = beta * (-np.sin(wy) / wy) - alpha * s
    wy = w + np.log1p(-d * ell)
    sy = np.sin(wy)
    cy = np.cos(wy)
    uhy = sy / (wy * wy) - cy / wy
    uby = sy * (wy + 2.0 - wy * wy) / (wy * wy * wy) - cy * (wy + 2.0) / (wy * wy)
    ratio = 1.0 / (1.0 - d * ell)  # L / L_y
    elly = ell * ratio  # 1 / L_y
    ua = alpha * uh * ell  # alpha * u(z)
    uby_small = beta * uhy * elly  # beta * u(z_y)
    p_a = alpha * uh + alpha * ub * ell / (1.0 + ua)
    p_b = beta * uhy + beta * uby * elly / (1.0 + uby_small)
    jac = (1.0 + ua) / (1.0 + uby_small)  # d ln H / d ln x
    return np.abs(p_a - ratio * p_b * jac)


xalpha_qq = maybe_jit(py_xalpha_qq)
yalpha_qq = maybe_jit(py_yalpha_qq)
xbar_qq = maybe_jit(py_xbar_qq)
xbarbar_qq = maybe_jit(py_xbarbar_qq)
xtilde_qq = maybe_jit(py_xtilde_qq)
sgen_qq = maybe_jit(py_sgen_qq)
perturb_shift = maybe_jit(py_perturb_shift)
perturb_osc_shift = maybe_jit(py_perturb_osc_shift)
profile_s = maybe_jit(py_profile_s)
profile_lu = maybe_jit(py_profile_lu)
profile_l2du = maybe_jit(py_profile_l2du)
profile_l2du_dw = maybe_jit(py_profile_l2du_dw)
affine_derivative_density = maybe_jit(py_affine_derivative_density)

PYTHON_KERNELS = {
    "xalpha_qq": py_xalpha_qq,
    "yalpha_qq": py_yalpha_qq,
    "xbar_qq": py_xbar_qq,
    "xbarbar_qq": py_xbarbar_qq,
    "xtilde_qq": py_xtilde_qq,
    "sgen_qq": py_sgen_qq,
    "perturb_shift": py_perturb_shift,
    "perturb_osc_shift": py_perturb_osc_shift,
    "profile_s": py_profile_s,
    "profile_lu": py_profile_lu,
    "profile_l2du": py_profile_l2du,
    "profile_l2du_dw": py_profile_l2du_dw,
    "affine_derivative_density": py_affine_derivative_density,
}

ACTIVE_KERNELS = {
    "xalpha_qq": xalpha_qq,
    "yalpha_qq": yalpha_qq,
    "xbar_qq": xbar_qq,
    "xbarbar_qq": xbarbar_qq,
    "xtilde_qq": xtilde_qq,
    "sgen_qq": sgen_qq,
    "perturb_shift": perturb_shift,
    "perturb_osc_shift": perturb_osc_shift,
    "profile_s": profile_s,
    "profile_lu": profile_lu,
    "profile_l2du": profile_l2du,
    "profile_l2du_dw": profile_l2du_dw,
    "affine_derivative_density": affine_derivative_density,
}
