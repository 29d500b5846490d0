"""Total-variation estimators and the variation asymptotics of the
profile-generated conjugacies.

The profile s(x) = -sin(w)/w (w = ln|ln x|) is the reparametrization
s(x) = shat(1/w) of shat(y) = -y sin(1/y), so

    int_eps^delta |Ds| dx = var(shat; [1/A, 1/w(delta)]),   A = ln|ln eps|,

which is computed *exactly* from the extrema of shat: they sit at y = 1/a_k
where tan(a_k) = a_k, and |shat(1/a_k)| = 1/sqrt(1 + a_k^2).  Summing the
extrema gives var ~ (2/pi) ln A, the slow triple-log growth in eps that no
x- or z-space quadrature could reach (A up to 1e4 means |ln eps| = e^A).

The affine-derivative curve of a cross-conjugacy between two profile
multiples is integrated directly in w from the exact w-density of
|D^2 H / D H| dx (see germflow._kernels.affine_derivative_density).
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import BudgetExceeded, DomainError, InsufficientSamples, NonConvergence
from .fields import DEFAULT_DELTAS

__all__ = [
    "shat",
    "TanFixedPoints",
    "tan_fixed_points",
    "total_variation",
    "shat_variation",
    "VariationCurve",
    "AsymptoteFit",
    "asymptote_fit",
    "conjugacy_variation_curve",
]


def shat(y):
    """The auxiliary profile shat(y) = -y sin(1/y)."""
    y = np.asarray(y, dtype=np.float64)
    return -y * np.sin(1.0 / y)


@dataclass(frozen=True)
class TanFixedPoints:
    """The first K positive solutions of tan(a) = a, increasing.

    a_k lies in (k pi, k pi + pi/2); residuals are evaluated in the
    cancellation-safe form cos(a) - sin(a)/a, whose slope at the root is
    O(1) (the raw |tan(a) - a| is hopeless near the tangent pole).
    """

    a: np.ndarray

    def residual(self):
        return np.cos(self.a) - np.sin(self.a) / self.a


def tan_fixed_points(count):
    """First `count` positive fixed points of tan, by safeguarded Newton."""
    if count < 1:
        raise ValueError("count must be >= 1")
    k = np.arange(1, count + 1, dtype=np.float64)
    hi = k * np.pi + 0.5 * np.pi
    lo = k * np.pi + 1e-12
    a = hi - 1.0 / hi  # asymptotic start
    for _ in range(12):
        r = np.cos(a) - np.sin(a) / a
        rp = -np.sin(a) - np.cos(a) / a + np.sin(a) / (a * a)
        step = r / rp
        a = np.clip(a - step, lo, hi)
    res = np.abs(np.cos(a) - np.sin(a) / a)
    if np.any(res > 1e-10):
        raise NonConvergence(f"tan fixed-point residual {res.max():.3g} > 1e-10")
    return TanFixedPoints(a)


def total_variation(f, lo, hi, refine_tol=1e-6, max_points=2**22, return_increment=False):
    """Total variation of f over [lo, hi] by dyadic partition refinement.

    f must be a vectorized evaluator of the interval variable.  The result
    is a lower bound of the true variation.  Refinement stops once three
    consecutive doublings each add less than `refine_tol` (a single small
    increment is not trusted: new midpoints can alias against an extremum
    and add exactly nothing for a level or two).
    """
    lo = float(lo)
    hi = float(hi)
    if hi <= lo:
        return (0.0, 0.0) if return_increment else 0.0
    n = 16
    prev = None
    increment = np.inf
    calm = 0
    while True:
        x = np.linspace(lo, hi, n + 1)
        vals = np.asarray(f(x), dtype=np.float64)
        tv = float(np.sum(np.abs(np.diff(vals))))
        if prev is not None:
            increment = tv - prev
            calm = calm + 1 if abs(increment) < refine_tol else 0
            if calm >= 3:
                break
        prev = tv
        n *= 2
        if n > max_points:
            raise BudgetExceeded(f"total_variation exceeded {max_points} points")
    return (tv, increment) if return_increment else tv


DEFAULT_PROFILE_DELTA = DEFAULT_DELTAS["sgenerated"]


def shat_variation(A, delta=DEFAULT_PROFILE_DELTA):
    """Exact var(shat; [1/A, 1/w(delta)]) from the extrema of shat.

    Equals int_eps^delta |Ds| dx for the unit profile, with A = ln|ln eps|.
    """
    A = float(A)
    w0 = float(np.log(-np.log(delta)))
    if not A > w0:
        raise DomainError(f"A must exceed w(delta) = {w0:.6g}")
    count = max(1, int(A / np.pi + 0.5) + 1)
    roots = tan_fixed_points(count).a
    roots = roots[(roots <= A) & (roots > w0)]
    if roots.size == 0:
        ys = np.array([1.0 / A, 1.0 / w0])
    else:
        ys = np.concatenate([[1.0 / A], 1.0 / roots[::-1], [1.0 / w0]])
    return float(np.sum(np.abs(np.diff(shat(ys)))))


@dataclass(frozen=True)
class VariationCurve:
    """Variation estimates V_j over growing intervals.

    `thresholds` carries the lower-endpoint gauge (A_j = ln|ln eps_j| for
    tail curves); values are non-decreasing since the integrand is >= 0.
    """

    thresholds: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("thresholds and values must be 1-d of equal length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("thresholds must be strictly increasing")
        object.__setattr__(self, "thresholds", t)
        object.__setattr__(self, "values", v)

    def upper_half(self):
        n = self.thresholds.size
        return VariationCurve(self.thresholds[n // 2:], self.values[n // 2:])


@dataclass(frozen=True)
class AsymptoteFit:
    slope: float
    intercept: float
    r2: float


def asymptote_fit(curve, gauge=np.log):
    """Least-squares affine fit of V_j against gauge(threshold_j)."""
    if curve.thresholds.size < 8:
        raise InsufficientSamples("asymptote_fit needs >= 8 points")
    g = np.asarray(gauge(curve.thresholds), dtype=np.float64)
    v = curve.values
    slope, intercept = np.polyfit(g, v, 1)
    resid = v - (slope * g + intercept)
    ss_tot = float(np.sum((v - v.mean()) ** 2))
    r2 = 0.0 if ss_tot <= 1e-300 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return AsymptoteFit(float(slope), float(intercept), r2)


def conjugacy_variation_curve(alpha, beta, A_grid, delta=DEFAULT_PROFILE_DELTA, tol=None):
    """Cumulative int_{eps_j}^{delta} |D^2 H / DH| dx for the cross-conjugacy
    H between the alpha- and beta-scaled profile flows.

    Thresholds are carried as A_j = ln|ln eps_j|; the integral is taken in w
    with the exact closed-form density, so the grid may reach A ~ 1e4 and
    beyond.  With alpha = beta the density vanishes identically.
    """
    from .quadrature import integrate_1d

    A = np.sort(np.asarray(A_grid, dtype=np.float64))
    w0 = float(np.log(-np.log(delta)))
    if A[0] <= w0:
        raise DomainError(f"A grid must start above w(delta) = {w0:.6g}")
    a = float(alpha)
    b = float(beta)
    dens = lambda w: K.affine_derivative_density(w, a, b)
    edges = np.concatenate([[w0], A])
    values = np.zeros(A.size)
    acc = 0.0
    for j in range(A.size):
        width = edges[j + 1] - edges[j]
        panel_tol = tol if tol is not None else 1e-9 * max(1.0, width)
        acc += integrate_1d(dens, edges[j], edges[j + 1], tol=panel_tol).value
        values[j] = acc
    return VariationCurve(A, values)
