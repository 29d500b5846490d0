"""Vector-field families contracting to the origin.

All families are hyperbolic contractions on an interval (0, delta] with
X(x) ~ lam * x near 0.  Each is evaluated through the reduced pair

    X(x) = lam * x / (1 + q(z)),      q' = dq/dz,

with q -> 0 at the origin (see ``germflow._kernels``).  Built-in families:

    linear         X = lam * x
    xalpha         X = -x / (1 + a/ln x)                       (single log)
    yalpha         X = -x * (1 - a/ln x)
    xbaralpha      X = -x / (1 + a/(ln x * ln|ln x|))          (double log)
    xbarbaralpha   X = -x / (1 + a/(ln x * ln|ln x| * ln ln|ln x|))
    xtildealpha    X = -x / (1 + a*cos(ln|ln x|)/ln x)
    sgenerated     X = -x / (1 + u),  u = -x*Ds from the profile s
    perturba       X = B / (1 + a*B/(x ln x)) over a base field B
    perturbb       same with an extra cos(ln|ln x|) factor

The two perturbation families keep the base multiplier; the explicit
families all have multiplier -1.  Evaluation is pure and immutable specs are
safe to share across threads.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from . import _kernels as K
from .errors import DegeneracyError, DomainError, NonConvergence, ParseError
from .logcoord import LogCoord

__all__ = [
    "FieldSpec",
    "SGenSpec",
    "DEFAULT_DELTAS",
    "eval_X",
    "eval_DX",
    "eval_X_z",
    "eval_DX_z",
    "time_density",
    "q_qp",
    "log_speed_ratio",
    "eval_s",
    "eval_Ds",
    "eval_u",
    "eval_Du",
    "field_from_s",
    "multiplier_estimate",
    "parse_field_spec",
    "format_field_spec",
    "audit_grid",
]

FAMILIES = (
    "linear",
    "xalpha",
    "yalpha",
    "xbaralpha",
    "xbarbaralpha",
    "xtildealpha",
    "sgenerated",
    "perturba",
    "perturbb",
)

_ALIASES = {
    "xbar": "xbaralpha",
    "xbarbar": "xbarbaralpha",
    "xtilde": "xtildealpha",
    "sgen": "sgenerated",
}

# Default domain caps: e^-3 for single-log families, e^-4 for double-log,
# e^-5 for the triple-log one (its denominator 1 - a/(L w v) crosses zero
# near e^-e for a ~ 1, so the double-log default would be degenerate there).
DEFAULT_DELTAS = {
    "linear": math.exp(-3.0),
    "xalpha": math.exp(-3.0),
    "yalpha": math.exp(-3.0),
    "xbaralpha": math.exp(-4.0),
    "xbarbaralpha": math.exp(-5.0),
    "xtildealpha": math.exp(-4.0),
    "sgenerated": math.exp(-4.0),
    "perturba": math.exp(-3.0),
    "perturbb": math.exp(-4.0),
}

# Hard caps: what the formulas themselves need.  Every family works in the
# w = ln|ln x| coordinate, so |ln x| > 1 throughout; the triple-log family
# additionally needs ln ln|ln x| > 0.  Inside these caps the construction
# audit still rejects any (family, alpha, delta) whose denominator 1 + q
# touches zero.
FORMULA_CAPS = {fam: math.exp(-1.05) for fam in FAMILIES}
FORMULA_CAPS["xbarbaralpha"] = math.exp(-math.e * 1.02)

_UNIT_MULTIPLIER_FAMILIES = frozenset(
    {"xalpha", "yalpha", "xbaralpha", "xbarbaralpha", "xtildealpha", "sgenerated"}
)

AUDIT_POINTS = 512
AUDIT_SPAN = 10.0


@dataclass(frozen=True)
class FieldSpec:
    """Immutable description of one vector field on (0, delta]."""

    family: str
    alpha: float = 0.0
    lam: float = -1.0
    delta: float = None
    base: "FieldSpec" = None

    def __post_init__(self):
        fam = _ALIASES.get(str(self.family).lower(), str(self.family).lower())
        if fam not in FAMILIES:
            raise ParseError(f"unknown family {self.family!r}")
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "alpha", float(self.alpha))

        if fam in ("perturba", "perturbb"):
            if self.base is None:
                raise ParseError(f"family {fam!r} requires a base field")
            object.__setattr__(self, "lam", float(self.base.lam))
        else:
            if self.base is not None:
                raise ParseError(f"family {fam!r} takes no base field")
            object.__setattr__(self, "lam", float(self.lam))
        if not (self.lam < 0.0) or not math.isfinite(self.lam):
            raise DomainError(f"multiplier must be negative and finite, got {self.lam}")
        if fam == "linear" and self.alpha != 0.0:
            raise ParseError("the linear family takes alpha = 0")
        if fam in _UNIT_MULTIPLIER_FAMILIES and self.lam != -1.0:
            raise ParseError(f"family {fam!r} has multiplier -1 by construction")

        delta = self.delta
        if delta is None:
            delta = DEFAULT_DELTAS[fam]
            if self.base is not None:
                delta = min(delta, self.base.delta)
        delta = float(delta)
        if not (0.0 < delta < 1.0):
            raise DomainError(f"delta must lie in (0, 1), got {delta}")
        if delta > FORMULA_CAPS[fam] * (1.0 + 1e-12):
            raise DomainError(
                f"delta={delta!r} exceeds the cap {FORMULA_CAPS[fam]!r} for family {fam!r}"
            )
        if self.base is not None and delta > self.base.delta * (1.0 + 1e-12):
            raise DomainError("delta may not exceed the base field's delta")
        object.__setattr__(self, "delta", delta)

        # degeneracy audit: 1 + q must stay above a safety floor on the
        # working domain (exactly-zero boundary cases are degenerate too)
        zg = audit_grid(self)
        qmin = float(np.min(1.0 + q_qp(self, zg)[0]))
        if qmin <= 1e-9:
            raise DegeneracyError(
                f"denominator 1+q reaches {qmin:.3g} on (0, delta] for {self}"
            )

    @property
    def z_delta(self):
        return math.log(self.delta)

    @property
    def w_delta(self):
        return math.log(-math.log(self.delta))


def audit_grid(spec, points=AUDIT_POINTS, span=AUDIT_SPAN):
    """Fixed audit grid: `points` values of z with w equi-spaced on
    [w(delta), w(delta) + span]."""
    w = np.linspace(spec.w_delta, spec.w_delta + span, points)
    return -np.exp(w)


def q_qp(spec, z):
    """Return (q, dq/dz) arrays for z = ln x (vectorized)."""
    z = np.asarray(z, dtype=np.float64)
    fam = spec.family
    a = spec.alpha
    if fam == "linear":
        zero = np.zeros_like(z)
        return zero, zero
    if fam == "xalpha":
        return K.xalpha_qq(z, a)
    if fam == "yalpha":
        return K.yalpha_qq(z, a)
    if fam == "xbaralpha":
        return K.xbar_qq(z, a)
    if fam == "xbarbaralpha":
        return K.xbarbar_qq(z, a)
    if fam == "xtildealpha":
        return K.xtilde_qq(z, a)
    if fam == "sgenerated":
        return K.sgen_qq(z, a)
    if fam == "perturba":
        qb, qbp = q_qp(spec.base, z)
        dq, dqp = K.perturb_shift(z, a * spec.lam)
        return qb + dq, qbp + dqp
    if fam == "perturbb":
        qb, qbp = q_qp(spec.base, z)
        dq, dqp = K.perturb_osc_shift(z, a * spec.lam)
        return qb + dq, qbp + dqp
    raise ParseError(f"unknown family {fam!r}")


def _check_domain(spec, z):
    z = np.asarray(z, dtype=np.float64)
    if np.any(z > spec.z_delta + 1e-12):
        raise DomainError(
            f"point(s) above the domain cap delta={spec.delta!r} (z_delta={spec.z_delta:.6g})"
        )
    return z


def eval_X_z(spec, z, checked=True):
    """Field value X(x) at z = ln x (vectorized).

    The value itself scales like lam*x and underflows float64 below
    roughly z < -745; deep-tail work should use `time_density` or the
    q-representation instead.
    """
    z = _check_domain(spec, z) if checked else np.asarray(z, dtype=np.float64)
    q, _ = q_qp(spec, z)
    den = 1.0 + q
    if np.any(den <= 0.0):
        raise DegeneracyError("denominator 1+q <= 0 at a requested point")
    return spec.lam * np.exp(z) / den


def eval_DX_z(spec, z, checked=True):
    """Derivative DX(x) at z = ln x (vectorized)."""
    z = _check_domain(spec, z) if checked else np.asarray(z, dtype=np.float64)
    q, qp = q_qp(spec, z)
    den = 1.0 + q
    if np.any(den <= 0.0):
        raise DegeneracyError("denominator 1+q <= 0 at a requested point")
    return spec.lam * (den - qp) / (den * den)


def time_density(spec, z, checked=False):
    """x / X(x) at z = ln x: the density of the time map with respect to dz.

    Bounded and cancellation-free at any depth (equals (1 + q)/lam).
    """
    if checked:
        z = _check_domain(spec, z)
    q, _ = q_qp(spec, z)
    return (1.0 + q) / spec.lam


def log_speed_ratio(spec_x, spec_y, z):
    """ln(X/Y) at z = ln x, computed without forming X or Y."""
    qx, _ = q_qp(spec_x, z)
    qy, _ = q_qp(spec_y, z)
    return math.log(spec_x.lam / spec_y.lam) + np.log1p(qy) - np.log1p(qx)


def time_density_diff(spec_x, spec_y, z):
    """x/X - x/Y at z = ln x: the dz-density of int (1/X - 1/Y).

    Formed from the q deviations directly (never as a difference of the two
    near-1/lam densities), so the tiny tail signal survives arbitrarily deep
    where (1+q) would round to 1.
    """
    qx, _ = q_qp(spec_x, z)
    qy, _ = q_qp(spec_y, z)
    const = 1.0 / spec_x.lam - 1.0 / spec_y.lam
    return qx / spec_x.lam - qy / spec_y.lam + const


def eval_X(spec, p):
    """Field value at a point (scalar form of `eval_X_z`)."""
    return float(eval_X_z(spec, np.array([p.z]))[0])


def eval_DX(spec, p):
    """Field derivative at a point (scalar form of `eval_DX_z`)."""
    return float(eval_DX_z(spec, np.array([p.z]))[0])


# ---------------------------------------------------------------------------
# profile-generated family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SGenSpec:
    """Scaled profile s_a = a * s with s(w) = -sin(w)/w in w = ln|ln x|.

    Closed forms for s, Ds, u = -x*Ds and Du are available at any depth;
    `c_floor` stores the audited minimum of 1 + u on the working domain.
    """

    alpha: float
    delta: float = DEFAULT_DELTAS["sgenerated"]
    c_floor: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha))
        delta = float(self.delta)
        if not (0.0 < delta <= FORMULA_CAPS["sgenerated"] * (1.0 + 1e-12)):
            raise DomainError(f"delta must keep ln|ln x| > 0, got {delta}")
        object.__setattr__(self, "delta", delta)
        w = np.linspace(self.w_delta, self.w_delta + AUDIT_SPAN, AUDIT_POINTS)
        floor = float(np.min(1.0 + self.alpha * K.profile_lu(w) * np.exp(-w)))
        if floor <= 0.0:
            raise DegeneracyError(f"1 + u reaches {floor:.3g} <= 0 on (0, delta]")
        object.__setattr__(self, "c_floor", floor)

    @property
    def w_delta(self):
        return math.log(-math.log(self.delta))

    def _w(self, p):
        if p.z > math.log(self.delta) + 1e-12:
            raise DomainError(f"point above delta={self.delta!r}")
        return p.w


def eval_s(sgen, p):
    """Profile value s_a(x) = -a sin(w)/w."""
    return float(sgen.alpha * K.profile_s(np.array([sgen._w(p)]))[0])


def eval_Ds(sgen, p):
    """Profile derivative Ds_a(x) = -u/x (overflows float64 below x ~ e^{-745})."""
    w = sgen._w(p)
    return float(-sgen.alpha * K.profile_lu(np.array([w]))[0] / p.L / p.x)


def eval_u(sgen, p):
    """u(x) = -x * Ds_a(x), bounded at any depth."""
    w = sgen._w(p)
    return float(sgen.alpha * K.profile_lu(np.array([w]))[0] / p.L)


def eval_Du(sgen, p):
    """Du(x) (overflows float64 below x ~ e^{-745}; tails use du/dz = x*Du)."""
    w = sgen._w(p)
    return float(sgen.alpha * K.profile_l2du(np.array([w]))[0] / (p.L * p.L) / p.x)


def field_from_s(sgen):
    """The field X = -x/(1+u) generated by the profile; multiplier -1."""
    return FieldSpec("sgenerated", alpha=sgen.alpha, lam=-1.0, delta=sgen.delta)


# ---------------------------------------------------------------------------
# multiplier estimation
# ---------------------------------------------------------------------------

_MULT_W_GRID = np.arange(2.0, 12.0 + 0.5, 1.0)


def multiplier_estimate(spec, cauchy_tol=1e-4):
    """Estimate lam = lim X(x)/x by sampling X/x on a w-grid toward 0.

    The sequence X(x_j)/x_j = lam/(1+q_j) is sampled at w = 2..12; the last
    increment serves as the error estimate and must fall below `cauchy_tol`,
    otherwise NonConvergence is raised.
    """
    w = np.maximum(_MULT_W_GRID, spec.w_delta + 1e-9)
    z = -np.exp(w)
    q, _ = q_qp(spec, z)
    vals = spec.lam / (1.0 + q)
    incs = np.abs(np.diff(vals))
    if incs.size and incs[-1] > cauchy_tol:
        raise NonConvergence(
            f"multiplier estimates still move by {incs[-1]:.3g} > {cauchy_tol:.3g} at w=12"
        )
    return float(vals[-1])


# ---------------------------------------------------------------------------
# spec-string grammar:  family:name,alpha=A,lambda=L,delta=D[,base=(...)]
# ---------------------------------------------------------------------------


def _split_top(text):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


def parse_field_spec(text):
    """Parse `family:name,alpha=A,lambda=L,delta=D[,base=(...)]`."""
    text = text.strip()
    parts = _split_top(text)
    head = parts[0].strip()
    if ":" not in head:
        raise ParseError(f"field spec must start with 'family:<name>', got {text!r}")
    tag, name = head.split(":", 1)
    if tag.strip().lower() != "family":
        raise ParseError(f"field spec must start with 'family:<name>', got {text!r}")
    kwargs = {}
    for part in parts[1:]:
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise ParseError(f"expected key=value, got {part!r}")
        key, value = part.split("=", 1)
        key = key.strip().lower()
        value = value.strip()
        if key == "base":
            if not (value.startswith("(") and value.endswith(")")):
                raise ParseError("base must be parenthesized: base=(family:...)")
            kwargs["base"] = parse_field_spec(value[1:-1])
        elif key in ("alpha", "lambda", "delta"):
            dest = "lam" if key == "lambda" else key
            try:
                kwargs[dest] = float(value)
            except ValueError:
                raise ParseError(f"bad numeric value for {key}: {value!r}") from None
        else:
            raise ParseError(f"unknown key {key!r} in field spec")
    try:
        return FieldSpec(name.strip(), **kwargs)
    except TypeError as e:
        raise ParseError(str(e)) from None


def format_field_spec(spec):
    """Canonical spec string (inverse of `parse_field_spec`)."""
    out = f"family:{spec.family},alpha={spec.alpha:.17g},lambda={spec.lam:.17g},delta={spec.delta:.17g}"
    if spec.base is not None:
        out += f",base=({format_field_spec(spec.base)})"
    return out
