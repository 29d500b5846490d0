"""Canonical conjugacy between two contracting flows.

The unique homeomorphism conjugating the flow of X to the flow of Y that
fixes an anchor a is

    h(x) = g^{s(x)}(x),    s(x) = int_a^x (1/X - 1/Y),

where g is the target flow; its derivative is Dh = Y(h)/X.  Equivalently h
shifts the target time map:  tau_Y(h(x)) = tau_X(x) + t  for a constant t
(the explicit-shift form).  Both forms are supported; anchored (at the
smaller of the two domain caps) is the default.

s is evaluated through the two time-map caches, whose exact linear parts
cancel for equal multipliers, so the map stays accurate arbitrarily deep.
Closed-form reference maps for cross-validation:

    halpha:  x |-> x * |ln x|^a          (z' = z + a*w... see closed_form)
    htilde:  x |-> x * e^{a sin(ln|ln x|)}
    hsgen:   x |-> e^{-a s(x)} x with the profile s(w) = -sin(w)/w
"""

from dataclasses import dataclass
import math

import numpy as np

from . import _kernels as K
from .errors import DomainError, ParseError
from .fields import q_qp
from .logcoord import LogCoord
from .timemap import TimeMapCache

__all__ = ["ConjugacyMap", "time_shift", "apply", "derivative", "closed_form"]


@dataclass
class ConjugacyMap:
    """Conjugacy from the flow of `source.spec` to the flow of `target.spec`.

    Exactly one of `anchor` (fixed point of h) or `shift` (explicit time
    shift t in h = tau_Y^{-1} T_t tau_X) is used; with neither given, the
    map is anchored at the smaller domain cap.  Immutable after
    construction; safe for concurrent reads.
    """

    source: TimeMapCache
    target: TimeMapCache
    anchor: LogCoord = None
    shift: float = None

    def __post_init__(self):
        if self.anchor is not None and self.shift is not None:
            raise ParseError("give at most one of anchor/shift")
        if self.anchor is None and self.shift is None:
            self.anchor = LogCoord(min(self.source.spec.z_delta, self.target.spec.z_delta))
        if self.anchor is not None:
            za = self.anchor.z
            if za > self.source.spec.z_delta + 1e-12 or za > self.target.spec.z_delta + 1e-12:
                raise DomainError("anchor must lie in both fields' domains")

    # -- time shift ---------------------------------------------------------

    def time_shift_z(self, z):
        """s(x) at z = ln x (vectorized)."""
        z = np.asarray(z, dtype=np.float64)
        w = np.log(-z)
        sx, sy = self.source, self.target
        inv_x = 1.0 / abs(sx.spec.lam)
        inv_y = 1.0 / abs(sy.spec.lam)
        if self.anchor is not None:
            za = self.anchor.z
            wa = self.anchor.w
            lin = (za - z) * (inv_x - inv_y)
            return lin + (sx._C_at(w) - sx._C_at(np.array([wa]))[0]) - (
                sy._C_at(w) - sy._C_at(np.array([wa]))[0]
            )
        # explicit-shift form: s = t + tau_X(x) - tau_Y(x); grouped so the
        # rate-difference multiplies z once (exact cancellation for equal
        # multipliers even where z dwarfs the shift)
        lin = sx.base.z * inv_x - sy.base.z * inv_y - z * (inv_x - inv_y)
        return self.shift + lin + sx._C_at(w) - sy._C_at(w)

    def time_shift(self, p):
        return float(self.time_shift_z(np.array([p.z]))[0])

    # -- the map and its derivative ------------------------------------------

    def apply_z(self, z):
        """h(x) in log coordinates (vectorized): flow the target for time s(x)."""
        z = np.asarray(z, dtype=np.float64)
        return self.target.flow_z(self.time_shift_z(z), z)

    def apply(self, p):
        return LogCoord(float(self.apply_z(np.array([p.z]))[0]))

    def derivative_z(self, z):
        """Dh(x) = Y(h(x)) / X(x) (vectorized), always positive.

        Uses the exact log-space shift ln h(x) - ln x, which stays accurate
        deep in the tail where h(x) and x agree to the last ulp.
        """
        z = np.asarray(z, dtype=np.float64)
        d = self.target.flow_shift_z(self.time_shift_z(z), z)
        qx, _ = q_qp(self.source.spec, z)
        qy, _ = q_qp(self.target.spec, z + d)
        lam_ratio = self.target.spec.lam / self.source.spec.lam
        return lam_ratio * np.exp(d) * (1.0 + qx) / (1.0 + qy)

    def derivative(self, p):
        return float(self.derivative_z(np.array([p.z]))[0])


def time_shift(m, p):
    return m.time_shift(p)


def apply(m, p):
    return m.apply(p)


def derivative(m, p):
    return m.derivative(p)


_CLOSED_FORMS = ("halpha", "htilde", "hsgen")


def closed_form(kind, alpha, p):
    """Closed-form conjugating maps to the linear flow, in log coordinates.

    halpha: z' = z + a*ln(-z); htilde: z' = z + a*sin(ln(-z));
    hsgen:  z' = z + a*sin(w)/w with w = ln(-z).
    """
    kind = str(kind).lower()
    if kind not in _CLOSED_FORMS:
        raise ParseError(f"unknown closed form {kind!r}; choose from {_CLOSED_FORMS}")
    z = p.z
    if kind == "halpha":
        if p.L <= 1.0:
            raise DomainError("halpha needs |ln x| > 1")
        zp = z + alpha * math.log(p.L)
    elif kind == "htilde":
        zp = z + alpha * math.sin(p.w)
    else:
        w = p.w
        zp = z - alpha * float(K.profile_s(np.array([w]))[0])
    if zp >= 0.0:
        raise DomainError("closed-form image left (0, 1)")
    return LogCoord(zp)
