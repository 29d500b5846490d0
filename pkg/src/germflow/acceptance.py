"""Programmatic acceptance suite.

Each criterion function computes its check at the pinned tolerance and
returns a CriterionResult with a deterministic detail string (no timings,
no environment info), so the `selftest` CLI report is byte-identical across
runs.  tests/test_acceptance.py drives the same functions under pytest and
additionally enforces the runtime budgets.
"""

from dataclasses import dataclass
import math

import numpy as np

from .conjugacy import ConjugacyMap
from .fields import FieldSpec, SGenSpec, field_from_s, multiplier_estimate
from .logcoord import LogCoord
from .regularity import (
    BOUNDED_OSCILLATING,
    CONVERGENT,
    DIVERGENT,
    INCONCLUSIVE,
    check_ac_conditions,
    classify_pair,
    flow_ac_bound_check,
)
from .timemap import TimeMapCache
from .variation import (
    VariationCurve,
    asymptote_fit,
    conjugacy_variation_curve,
    shat_variation,
    tan_fixed_points,
)

__all__ = ["CriterionResult", "CRITERIA", "build_report", "render_report", "selftest_text"]

TWO_OVER_PI = 2.0 / math.pi


@dataclass(frozen=True)
class CriterionResult:
    key: str
    name: str
    passed: bool
    detail: str


def _fields_under_test():
    lin = FieldSpec("linear")
    return [
        ("linear", lin),
        ("xalpha_1", FieldSpec("xalpha", alpha=1.0)),
        ("xtilde_1", FieldSpec("xtildealpha", alpha=1.0)),
        ("sgen_1", field_from_s(SGenSpec(1.0))),
        ("perturba_1", FieldSpec("perturba", alpha=1.0, base=lin)),
    ]


def _audit_points(spec, n=20):
    z0 = spec.z_delta - 5.5
    z1 = spec.z_delta - 16.0
    return np.linspace(z0, z1, n)


def criterion_flow_group_law():
    """1: f^{s+t} = f^s o f^t on a (s,t) grid, relative to x, < 1e-7."""
    st = np.linspace(-2.0, 2.0, 7)
    worst = 0.0
    for _, spec in _fields_under_test():
        tm = TimeMapCache(spec)
        z = _audit_points(spec)
        for s in st:
            for t in st:
                direct = tm.flow_z(s + t, z)
                composed = tm.flow_z(s, tm.flow_z(t, z))
                err = np.abs(np.exp(direct - z) - np.exp(composed - z))
                worst = max(worst, float(err.max()))
    return CriterionResult(
        "1", "flow-group-law", worst < 1e-7, f"max |f^(s+t)-f^s(f^t)|/x = {worst:.3e}"
    )


def criterion_invariance_identity():
    """2: Df^t from finite differences matches X(f^t x)/X(x) to 1e-4."""
    st = np.linspace(-2.0, 2.0, 7)
    h = 1e-6
    worst = 0.0
    for _, spec in _fields_under_test():
        tm = TimeMapCache(spec)
        z = _audit_points(spec)
        for t in st:
            if t == 0.0:
                continue
            z_f = tm.flow_z(t, z)
            dzf = (tm.flow_z(t, z + h) - tm.flow_z(t, z - h)) / (2.0 * h)
            df_fd = np.exp(z_f - z) * dzf
            df = tm.flow_derivative_z(t, z)
            worst = max(worst, float(np.max(np.abs(df_fd - df) / np.abs(df))))
    return CriterionResult(
        "2", "invariance-identity", worst < 1e-4, f"max rel |Df^t(FD) - X(f^t)/X| = {worst:.3e}"
    )


def criterion_closed_form_conjugacy():
    """3: anchored numeric conjugacy matches the closed forms to 1e-6."""
    lin = FieldSpec("linear")
    tm_lin = TimeMapCache(lin)
    worst = 0.0
    for alpha in (0.5, 1.0, 2.0):
        spec = FieldSpec("xalpha", alpha=alpha)
        cm = ConjugacyMap(TimeMapCache(spec), tm_lin)
        wa = cm.anchor.w
        z = np.linspace(spec.z_delta - 0.2, -14.0, 50)
        zh = cm.apply_z(z)
        zh_cf = z + alpha * (np.log(-z) - wa)
        worst = max(worst, float(np.max(np.abs(np.expm1(zh - zh_cf)))))
    for alpha in (0.5, 1.0, 2.0):
        spec = FieldSpec("xtildealpha", alpha=alpha)
        cm = ConjugacyMap(TimeMapCache(spec), tm_lin)
        wa = cm.anchor.w
        z = np.linspace(spec.z_delta - 0.2, -14.0, 50)
        zh = cm.apply_z(z)
        zh_cf = z + alpha * (np.sin(np.log(-z)) - math.sin(wa))
        worst = max(worst, float(np.max(np.abs(np.expm1(zh - zh_cf)))))
    return CriterionResult(
        "3", "closed-form-conjugacy", worst < 1e-6, f"max rel |h - closed form| = {worst:.3e}"
    )


def classifier_matrix():
    """The 12-pair matrix of criterion 4 with expected verdicts."""
    lin = FieldSpec("linear")
    X = lambda a: FieldSpec("xalpha", alpha=a)
    Xt = lambda a: FieldSpec("xtildealpha", alpha=a) if a else lin
    Y = lambda a: FieldSpec("yalpha", alpha=a)
    Xb = lambda a: FieldSpec("xbaralpha", alpha=a)
    return [
        ("xalpha 0.5 vs 0.2", X(0.5), X(0.2), "no", "no"),
        ("xalpha 1 vs 0.5", X(1.0), X(0.5), "no", "no"),
        ("xalpha 2 vs 1", X(2.0), X(1.0), "no", "no"),
        ("xtilde 1 vs 0", Xt(1.0), Xt(0.0), "yes", "no"),
        ("xtilde 2 vs 1", Xt(2.0), Xt(1.0), "yes", "no"),
        ("xtilde 0.5 vs 0.2", Xt(0.5), Xt(0.2), "yes", "no"),
        ("xalpha 1 vs yalpha 1", X(1.0), Y(1.0), "yes", "yes"),
        ("xalpha 0.5 vs yalpha 0.5", X(0.5), Y(0.5), "yes", "yes"),
        ("xalpha 1 vs xbar 1", X(1.0), Xb(1.0), "no", "no"),
        ("xalpha 0.5 vs xbar 0.5", X(0.5), Xb(0.5), "no", "no"),
        ("xalpha 1 vs itself", X(1.0), X(1.0), "yes", "yes"),
        ("xtilde 1 vs itself", Xt(1.0), Xt(1.0), "yes", "yes"),
    ]


def criterion_classifier_matrix():
    """4: the classifier reproduces the qualitative table, no inconclusives."""
    rows = classifier_matrix()
    bad = []
    inconclusive = 0
    for name, fx, fy, want_bilip, want_c1 in rows:
        v = classify_pair(fx, fy)
        if "inconclusive" in (v.bilipschitz, v.c1):
            inconclusive += 1
        if v.bilipschitz != want_bilip or v.c1 != want_c1:
            bad.append(f"{name}: got ({v.bilipschitz},{v.c1}) want ({want_bilip},{want_c1})")
    ok = not bad and inconclusive == 0
    detail = f"{len(rows) - len(bad)}/{len(rows)} expected verdicts, {inconclusive} inconclusive"
    if bad:
        detail += "; " + "; ".join(bad)
    return CriterionResult("4", "classifier-matrix", ok, detail)


def criterion_multiplier_preservation():
    """5: bi-Lipschitz pairs share multipliers; unit families sit at -1."""
    rows = classifier_matrix()
    worst_pair = 0.0
    worst_unit = 0.0
    for name, fx, fy, want_bilip, _ in rows:
        mx = multiplier_estimate(fx)
        my = multiplier_estimate(fy)
        if want_bilip == "yes":
            worst_pair = max(worst_pair, abs(mx - my))
        for spec, m in ((fx, mx), (fy, my)):
            if spec.family in ("xalpha", "yalpha", "xtildealpha", "xbaralpha", "sgenerated"):
                worst_unit = max(worst_unit, abs(m + 1.0))
            elif spec.family == "linear":
                worst_unit = max(worst_unit, abs(m - spec.lam))
    ok = worst_pair < 1e-3 and worst_unit < 1e-3
    return CriterionResult(
        "5",
        "multiplier-preservation",
        ok,
        f"max pair gap = {worst_pair:.3e}, max |mult - (-1)| = {worst_unit:.3e}",
    )


def criterion_ac_conditions():
    """6: the seven-conditions report passes for the unit profile."""
    rep = check_ac_conditions(SGenSpec(1.0))
    iv = rep.conditions["iv"]
    ok = rep.all_pass and iv.behavior.label == DIVERGENT and iv.behavior.growth_fit.gauge == "ln_w"
    passing = ",".join(k for k, c in rep.conditions.items() if c.passed)
    detail = (
        f"pass: [{passing}]; (iv) {iv.behavior.label} gauge={iv.behavior.growth_fit.gauge} "
        f"slope={iv.behavior.growth_fit.slope:.4f}"
    )
    return CriterionResult("6", "ac-conditions", ok, detail)


def criterion_variation_asymptotics():
    """7: slope 2/pi of the variation curves, pairwise consistency."""
    A = np.geomspace(1e2, 1e4, 24)
    shat_curve = VariationCurve(A, np.array([shat_variation(a) for a in A]))
    fit_s = asymptote_fit(shat_curve.upper_half())
    c10 = conjugacy_variation_curve(1.0, 0.0, A)
    fit_10 = asymptote_fit(c10.upper_half())
    c21 = conjugacy_variation_curve(1.5, 0.5, A)
    fit_21 = asymptote_fit(c21.upper_half())
    ok = (
        abs(fit_s.slope - TWO_OVER_PI) <= 0.07
        and fit_s.r2 >= 0.995
        and abs(fit_10.slope - TWO_OVER_PI) <= 0.07
        and abs(fit_21.slope - fit_10.slope) <= 0.1 * abs(fit_10.slope)
    )
    detail = (
        f"shat slope={fit_s.slope:.4f} r2={fit_s.r2:.5f}; conj(1,0) slope={fit_10.slope:.4f}; "
        f"conj(1.5,0.5) slope={fit_21.slope:.4f} (2/pi={TWO_OVER_PI:.4f})"
    )
    return CriterionResult("7", "variation-asymptotics", ok, detail)


def criterion_flow_variation_bound():
    """8: var(log Df^t) <= 2|t| var(DX) for a range of t."""
    spec = FieldSpec("xalpha", alpha=1.0)
    a = LogCoord(-3.0)
    eps = LogCoord(-math.e**3)
    tm = TimeMapCache(spec)
    parts = []
    ok = True
    for t in (0.1, 0.5, 1.0, 2.0):
        lhs, rhs = flow_ac_bound_check(spec, t, a, eps, check=False, cache=tm)
        good = lhs <= rhs * (1.0 + 1e-3)
        ok = ok and good
        parts.append(f"t={t:g}: {lhs:.4f}<={rhs:.4f}")
    return CriterionResult("8", "flow-variation-bound", ok, "; ".join(parts))


def criterion_tan_fixed_points():
    """9: first 100 roots of tan(a)=a and the extremum-height identity."""
    tfp = tan_fixed_points(100)
    res = float(np.max(np.abs(tfp.residual())))
    heights = np.abs(np.sin(tfp.a) / tfp.a)
    ident = float(np.max(np.abs(heights - 1.0 / np.sqrt(1.0 + tfp.a**2))))
    ok = res < 1e-10 and ident < 1e-12
    return CriterionResult(
        "9", "tan-fixed-points", ok, f"max residual = {res:.3e}, identity gap = {ident:.3e}"
    )


CRITERIA = [
    criterion_flow_group_law,
    criterion_invariance_identity,
    criterion_closed_form_conjugacy,
    criterion_classifier_matrix,
    criterion_multiplier_preservation,
    criterion_ac_conditions,
    criterion_variation_asymptotics,
    criterion_flow_variation_bound,
    criterion_tan_fixed_points,
]


def build_report():
    return [fn() for fn in CRITERIA]


def render_report(results):
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.key:>2} {r.name:<24} {r.detail}")
    return "\n".join(lines) + "\n"


def selftest_text():
    """Full selftest report: criteria 1-9 plus the determinism criterion,
    which rebuilds the report and compares byte-for-byte."""
    first = render_report(build_report())
    second = render_report(build_report())
    deterministic = first == second
    status = "PASS" if deterministic else "FAIL"
    lines = first + f"{status} 10 determinism               rebuilt report {'matches' if deterministic else 'differs'}\n"
    all_passed = deterministic and all(l.startswith("PASS") for l in first.splitlines())
    return lines, all_passed
