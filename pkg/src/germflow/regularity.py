"""Conjugacy-class criteria as tail-behavior classifiers.

For a pair of hyperbolic contracting fields X, Y the decisive quantities are
the pointwise log-ratio ln(X/Y) and the cumulative time integral
int_eps^delta (1/X - 1/Y), both sampled along a w = ln|ln eps| grid toward
the origin:

    both convergent                -> C1-conjugate (and bi-Lipschitz),
    both bounded (poss. oscillating) -> bi-Lipschitz,
    either divergent               -> not bi-Lipschitz.

The verdicts are finite-horizon heuristics: INCONCLUSIVE is a legitimate
output, and divergence additionally requires a clean affine fit against one
of the gauges {w, ln w}.

The module also audits the seven conditions under which a profile s
generates a C^{1+ac} field while the induced conjugacy has unbounded
derivative variation, and checks the flow-variation bound
var(log Df^t) <= 2|t| var(DX).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels as K
from .errors import InsufficientSamples, NonConvergence, NotHyperbolic
from .fields import (
    eval_DX_z,
    log_speed_ratio,
    multiplier_estimate,
    time_density,
    time_density_diff,
)
from .logcoord import LogCoord
from .quadrature import Integrand, TailSamples, integrate_1d, tail_sequence
from .timemap import TimeMapCache
from .variation import shat_variation, total_variation

__all__ = [
    "CONVERGENT",
    "BOUNDED_OSCILLATING",
    "DIVERGENT",
    "INCONCLUSIVE",
    "GrowthFit",
    "TailBehavior",
    "RegularityVerdict",
    "AcCondition",
    "AcConditionsReport",
    "ClassifyParams",
    "tail_behavior",
    "classify_pair",
    "check_ac_conditions",
    "flow_ac_bound_check",
]

CONVERGENT = "convergent"
BOUNDED_OSCILLATING = "bounded_oscillating"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GrowthFit:
    gauge: str  # "w" or "ln_w"
    slope: float
    r2: float


@dataclass(frozen=True)
class TailBehavior:
    label: str
    limit: Optional[float] = None
    bounds: Optional[tuple] = None
    growth_fit: Optional[GrowthFit] = None


def _affine_fit(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 0.0 if ss_tot <= 1e-300 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), float(r2)


def tail_behavior(samples, conv_tol=1e-3, slope_min=1e-2, bound_cap=1e3, r2_min=0.99):
    """Classify the behavior of tail samples as eps -> 0.

    CONVERGENT when the last quarter's range is below `conv_tol`; otherwise
    DIVERGENT when the best affine fit of the last half against a gauge in
    {w, ln w} has r2 >= `r2_min` and |slope| >= `slope_min`; otherwise
    BOUNDED_OSCILLATING when the full range stays below `bound_cap`; else
    INCONCLUSIVE.
    """
    n = len(samples)
    if n < 16:
        raise InsufficientSamples(f"tail_behavior needs >= 16 samples, got {n}")
    w = samples.w_grid
    vals = samples.values
    q4 = vals[-(n // 4):]
    if float(q4.max() - q4.min()) < conv_tol:
        return TailBehavior(CONVERGENT, limit=float(q4.mean()))
    half = slice(n // 2, None)
    best = None
    for gauge_name, gauge_vals in (("w", w[half]), ("ln_w", np.log(w[half]))):
        slope, _, r2 = _affine_fit(gauge_vals, vals[half])
        fit = GrowthFit(gauge_name, slope, r2)
        if best is None or fit.r2 > best.r2:
            best = fit
    if best.r2 >= r2_min and abs(best.slope) >= slope_min:
        return TailBehavior(DIVERGENT, growth_fit=best)
    lo, hi = float(vals.min()), float(vals.max())
    if hi - lo < bound_cap:
        return TailBehavior(BOUNDED_OSCILLATING, bounds=(lo, hi), growth_fit=best)
    return TailBehavior(INCONCLUSIVE, bounds=(lo, hi), growth_fit=best)


@dataclass(frozen=True)
class RegularityVerdict:
    log_ratio: TailBehavior
    time_integral: TailBehavior
    bilipschitz: str  # yes / no / inconclusive
    c1: str
    multiplier_x: float
    multiplier_y: float


@dataclass(frozen=True)
class ClassifyParams:
    w_span: float = 40.0
    samples: int = 64
    conv_tol: float = 1e-3
    slope_min: float = 1e-2
    bound_cap: float = 1e3
    r2_min: float = 0.99
    tol: Optional[float] = None  # per-panel quadrature tolerance


def classify_pair(spec_x, spec_y, params=None):
    """Classify the conjugacy class of a pair of fields.

    Builds tail samples of ln(X/Y) (pointwise) and of the cumulative time
    integral (by quadrature), classifies each, and combines:
    c1 = yes iff both convergent; bilipschitz = yes iff both stay bounded;
    bilipschitz = no iff either diverges; inconclusive otherwise.
    """
    p = params or ClassifyParams()
    try:
        mult_x = multiplier_estimate(spec_x)
        mult_y = multiplier_estimate(spec_y)
    except NonConvergence as e:
        raise NotHyperbolic(f"multiplier estimate failed: {e}") from e
    delta = LogCoord(min(spec_x.z_delta, spec_y.z_delta))
    w0 = delta.w
    w_grid = np.linspace(w0, w0 + p.w_span, p.samples)
    z_grid = -np.exp(w_grid)
    ratio = TailSamples(w_grid, log_speed_ratio(spec_x, spec_y, z_grid))
    diff = Integrand(lambda z: time_density_diff(spec_x, spec_y, z), coordinate="z")
    time_samples = tail_sequence(diff, delta, w0 + p.w_span, p.samples, tol=p.tol)
    tb_ratio = tail_behavior(ratio, p.conv_tol, p.slope_min, p.bound_cap, p.r2_min)
    tb_time = tail_behavior(time_samples, p.conv_tol, p.slope_min, p.bound_cap, p.r2_min)

    labels = (tb_ratio.label, tb_time.label)
    if DIVERGENT in labels:
        bilip = "no"
    elif all(l in (CONVERGENT, BOUNDED_OSCILLATING) for l in labels):
        bilip = "yes"
    else:
        bilip = "inconclusive"
    if labels == (CONVERGENT, CONVERGENT):
        c1 = "yes"
    elif bilip == "no":
        c1 = "no"
    elif bilip == "yes":
        c1 = "no" if BOUNDED_OSCILLATING in labels else "inconclusive"
    else:
        c1 = "inconclusive"
    return RegularityVerdict(tb_ratio, tb_time, bilip, c1, mult_x, mult_y)


# ---------------------------------------------------------------------------
# the seven conditions for the profile-generated family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AcCondition:
    passed: bool
    behavior: TailBehavior
    note: str = ""


@dataclass(frozen=True)
class AcConditionsReport:
    conditions: dict
    c_floor: float

    @property
    def all_pass(self):
        return all(c.passed for c in self.conditions.values())

    @property
    def degenerate(self):
        others = all(c.passed for k, c in self.conditions.items() if k != "iv")
        return others and not self.conditions["iv"].passed


def _pointwise_tail(w_grid, values, conv_tol, zero_tol):
    tb = tail_behavior(TailSamples(w_grid, values), conv_tol=conv_tol)
    ok = tb.label == CONVERGENT and abs(tb.limit) <= zero_tol
    return tb, ok


def check_ac_conditions(sgen, conv_tol=1e-3, slope_min=1e-2):
    """Audit the seven conditions on the profile-generated field.

    (i) s continuous with s -> 0; (ii) u -> 0 and 1+u >= c > 0;
    (iii) int|Du| dx finite; (iv) int|Ds| dx infinite (flagged as a
    divergent tail in the ln w gauge); (v) x*Du -> 0; (vi) int x (Du)^2 dx
    finite; (vii) int |D(x Du)| dx finite.  All integrals are carried in
    the w coordinate where they are exact at any depth; (iv) uses the exact
    extrema sum of the reparametrized profile.
    """
    a = sgen.alpha
    w0 = sgen.w_delta
    w_grid = np.linspace(w0, w0 + 40.0, 64)
    # pointwise limits need a much deeper horizon than the integral tails:
    # s decays only like 1/w, so the grid is geometric out to w = 1e5
    # (these are pure functions of w, so depth is free)
    w_point = np.geomspace(max(w0, 1.01), 1e5, 64)
    ell_point = np.exp(-w_point)
    conditions = {}

    tb, ok = _pointwise_tail(w_point, a * K.profile_s(w_point), conv_tol, 10 * conv_tol)
    conditions["i"] = AcCondition(ok, tb, "s -> 0")

    u_vals = a * K.profile_lu(w_point) * ell_point
    tb, ok = _pointwise_tail(w_point, u_vals, conv_tol, 10 * conv_tol)
    ok = ok and sgen.c_floor > 0.0
    conditions["ii"] = AcCondition(ok, tb, f"u -> 0 and 1+u >= {sgen.c_floor:.6g}")

    # integrable parts: w-densities of the |.| dx integrals
    def cumulative(density, grid):
        vals = np.zeros_like(grid)
        acc = 0.0
        for j in range(1, grid.size):
            acc += integrate_1d(density, grid[j - 1], grid[j], tol=1e-10).value
            vals[j] = acc
        return TailSamples(grid, vals)

    dens_iii = lambda w: np.abs(a * K.profile_l2du(w)) * np.exp(-w)
    tb = tail_behavior(cumulative(dens_iii, w_grid), conv_tol=conv_tol)
    conditions["iii"] = AcCondition(tb.label == CONVERGENT, tb, "int |Du| dx")

    A_grid = np.geomspace(max(5.0, w0 + 3.0), 1000.0, 48)
    v_iv = np.array([shat_variation(A, delta=sgen.delta) for A in A_grid]) * abs(a)
    tb = tail_behavior(
        TailSamples(A_grid, v_iv), conv_tol=conv_tol, slope_min=slope_min
    )
    ok = tb.label == DIVERGENT and tb.growth_fit.gauge == "ln_w"
    conditions["iv"] = AcCondition(ok, tb, "int |Ds| dx diverges (ln w gauge)")

    xdu = a * K.profile_l2du(w_point) * ell_point * ell_point
    tb, ok = _pointwise_tail(w_point, xdu, conv_tol, 10 * conv_tol)
    conditions["v"] = AcCondition(ok, tb, "x*Du -> 0")

    dens_vi = lambda w: (a * K.profile_l2du(w)) ** 2 * np.exp(-3.0 * w)
    tb = tail_behavior(cumulative(dens_vi, w_grid), conv_tol=conv_tol)
    conditions["vi"] = AcCondition(tb.label == CONVERGENT, tb, "int x (Du)^2 dx")

    dens_vii = lambda w: np.abs(
        a * (2.0 * K.profile_l2du(w) - K.profile_l2du_dw(w))
    ) * np.exp(-2.0 * w)
    tb = tail_behavior(cumulative(dens_vii, w_grid), conv_tol=conv_tol)
    conditions["vii"] = AcCondition(tb.label == CONVERGENT, tb, "int |D(x Du)| dx")

    return AcConditionsReport(conditions, sgen.c_floor)


# ---------------------------------------------------------------------------
# flow-variation bound
# ---------------------------------------------------------------------------


def flow_ac_bound_check(spec, t, a, eps, check=True, cache=None):
    """Check var(log Df^t; [eps, a]) <= 2|t| var(DX).

    lhs = int_eps^a |DX(f^t x) - DX(x)| / |X| dx by quadrature (the flow is
    evaluated at every node); rhs = 2|t| TV(DX) over [eps, a'] where a' = a
    for t > 0 and a' = f^t(a) for t < 0 (the flow then moves points above
    a).  Returns (lhs, rhs); with check=True raises BoundViolation when the
    inequality fails beyond a 1e-3 slack.
    """
    from .errors import BoundViolation

    if t == 0.0:
        raise ValueError("t must be nonzero")
    if not eps.z < a.z:
        raise ValueError("need eps < a")
    tm = cache if cache is not None else TimeMapCache(spec, base=LogCoord(spec.z_delta))

    def density(z):
        dxf = eval_DX_z(spec, tm.flow_z(float(t), z), checked=False)
        dx = eval_DX_z(spec, z, checked=False)
        return np.abs(dxf - dx) * np.abs(time_density(spec, z))

    lhs = integrate_1d(density, eps.z, a.z, tol=1e-9 * max(1.0, a.z - eps.z)).value

    z_hi = a.z if t > 0 else float(tm.flow_z(float(t), np.array([a.z]))[0])
    tv = total_variation(lambda z: eval_DX_z(spec, z, checked=False), eps.z, z_hi,
                         refine_tol=1e-8)
    rhs = 2.0 * abs(t) * tv
    if check and lhs > rhs * (1.0 + 1e-3):
        raise BoundViolation(f"flow variation bound failed: lhs={lhs!r} > rhs={rhs!r}")
    return lhs, rhs
