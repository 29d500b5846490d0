"""Time map, flow and flow derivative of a contracting field.

For a field X with multiplier lam < 0 the time map from the base point b is

    tau(x) = int_b^x dy / X(y),   tau(b) = 0,   tau strictly decreasing in x.

tau splits into an exact linear part plus a slowly varying correction,

    tau(z) = (z_b - z)/|lam| + C(w),      w = ln(-z),

where C accumulates the deviation of x/X from 1/lam.  C and its derivative
dC/dw are tabulated on a uniform w-grid (cubic Hermite between nodes, node
spacing chosen so the interpolation error stays below ~1e-10) and the table
extends lazily toward the origin up to a configurable w cap.  Flows solve
the *relative* equation

    (z - z_f)/|lam| + C(w_f) - C(w) = t

by Newton's method with the exact derivative d tau/dz = x/X, which stays
accurate even where tau itself is astronomically large.

A cache is safe for concurrent reads once construction/extension is done;
`freeze()` pins the table and makes further extension an error.
"""

import math

import numpy as np

from .errors import NonConvergence, RangeExceeded
from .fields import q_qp, time_density
from .logcoord import LogCoord
from .quadrature import _WGK, _XGK

__all__ = ["TimeMapCache", "tau", "tau_inv", "flow", "flow_derivative"]

_SEG_H = 1.0 / 128.0  # w-node spacing; |C''''| ~ alpha keeps Hermite error < 1e-10
_CHUNK = 2.0  # lazy extension granularity in w
_RESID_TOL = 1e-12
_MAX_NEWTON = 60


class TimeMapCache:
    """Tabulated time map of one field, normalized to tau(base) = 0."""

    def __init__(self, spec, base=None, w_cap=50.0):
        self.spec = spec
        self.base = base if base is not None else LogCoord(spec.z_delta)
        if self.base.z > spec.z_delta + 1e-12:
            raise RangeExceeded("base point must lie inside (0, delta]")
        self.w_cap = float(w_cap)
        self._inv_rate = 1.0 / abs(spec.lam)
        self._w0 = self.base.w
        self._wn = np.array([self._w0])
        self._C = np.array([0.0])
        self._D = np.array([self._correction_density(self._wn)[0]])
        self._frozen = False
        self._ensure(self._w0)  # at least one chunk, so interpolation is total

    # -- table construction ------------------------------------------------

    def _correction_density(self, w):
        # dC/dw = -L * (x/X - 1/lam) = -L * q / lam at z = -e^w, formed from
        # q directly so the deviation survives where 1 + q rounds to 1
        z = -np.exp(np.asarray(w, dtype=np.float64))
        q, _ = q_qp(self.spec, z)
        return (z * q) / self.spec.lam

    def _ensure(self, w_need, pad=0.25):
        w_need = float(w_need)
        if w_need > self.w_cap:
            raise RangeExceeded(
                f"requested depth w={w_need:.4g} beyond the cap w_cap={self.w_cap}"
            )
        target = w_need + pad
        if target <= self._wn[-1]:
            return
        if self._frozen:
            raise RangeExceeded("cache is frozen; table extension disabled")
        while self._wn[-1] < target:
            lo = self._wn[-1]
            hi = lo + _CHUNK
            n_seg = max(1, int(round((hi - lo) / _SEG_H)))
            edges = lo + (hi - lo) * np.arange(n_seg + 1) / n_seg
            mid = 0.5 * (edges[:-1] + edges[1:])
            half = 0.5 * (edges[1] - edges[0])
            nodes = mid[:, None] + half * _XGK[None, :]
            dens = self._correction_density(nodes.ravel()).reshape(nodes.shape)
            seg = (dens @ _WGK) * half
            self._wn = np.concatenate([self._wn, edges[1:]])
            self._C = np.concatenate([self._C, self._C[-1] + np.cumsum(seg)])
            self._D = np.concatenate([self._D, self._correction_density(edges[1:])])

    def freeze(self):
        """Pin the table; concurrent readers never observe partial state."""
        self._frozen = True
        return self

    def table(self):
        """The tabulated monotone pairs (z_i, tau_i), z decreasing."""
        z = -np.exp(self._wn)
        return z, (self.base.z - z) * self._inv_rate + self._C

    # -- evaluation ----------------------------------------------------------

    def _C_at(self, w):
        w = np.asarray(w, dtype=np.float64)
        self._ensure(float(np.max(w)), pad=0.0)
        wq = np.clip(w, self._w0, self._wn[-1])
        idx = np.clip(np.searchsorted(self._wn, wq, side="right") - 1, 0, self._wn.size - 2)
        h = self._wn[idx + 1] - self._wn[idx]
        t = (wq - self._wn[idx]) / h
        t2 = t * t
        t3 = t2 * t
        return (
            self._C[idx] * (2.0 * t3 - 3.0 * t2 + 1.0)
            + self._C[idx + 1] * (3.0 * t2 - 2.0 * t3)
            + self._D[idx] * h * (t3 - 2.0 * t2 + t)
            + self._D[idx + 1] * h * (t3 - t2)
        )

    def tau_z(self, z):
        """tau at z = ln x (vectorized)."""
        z = np.asarray(z, dtype=np.float64)
        if np.any(z > self.base.z + 1e-12):
            raise RangeExceeded("tau requested above the base point")
        w = np.log(-z)
        return (self.base.z - z) * self._inv_rate + self._C_at(w)

    def tau(self, p):
        """Time-map value tau(x) (scalar)."""
        return float(self.tau_z(np.array([p.z]))[0])

    def _solve_shift(self, z, t):
        """Solve tau(z + d) - tau(z) = t for the increment d (vectorized).

        Working in the increment keeps the solve well-posed arbitrarily deep:
        for |z| beyond ~1e16 the shift is smaller than one ulp of z, so z + d
        quantizes, but d itself (what flows and derivatives need) stays exact.
        """
        z = np.asarray(z, dtype=np.float64)
        t = np.broadcast_to(np.asarray(t, dtype=np.float64), z.shape).astype(np.float64)
        w = np.log(-z)
        # coarse range check against the base point (exact near the boundary,
        # where it matters; deep in the tail tau is huge and positive anyway)
        target = self.tau_z(z) + t
        if np.any(target < -1e-9 * (1.0 + np.abs(t))):
            raise RangeExceeded("flow leaves the domain above the base point")
        lam_abs = abs(self.spec.lam)
        d = -lam_abs * t
        d_hi = self.base.z - z
        d_lo = -math.exp(self.w_cap) - z
        w_guess = float(np.max(w + np.log1p(np.maximum(-np.minimum(d, 0.0), 0.0) * np.exp(-w))))
        self._ensure(min(w_guess + lam_abs * float(np.max(np.abs(t))) + 0.5, self.w_cap))
        ell = np.exp(-w)
        C_from = self._C_at(w)
        tol = _RESID_TOL * (1.0 + np.abs(t))
        resid = np.zeros_like(z)
        for _ in range(_MAX_NEWTON):
            d = np.clip(d, d_lo, d_hi)
            w_f = w + np.log1p(-d * ell)
            resid = -d * self._inv_rate + self._C_at(w_f) - C_from - t
            if np.all(np.abs(resid) <= tol):
                break
            phi = time_density(self.spec, z + d)
            d = d - resid / phi
        else:
            bad = np.abs(resid) > tol
            pinned = d <= d_lo + 1e-9 * np.abs(d_lo)
            if np.any(bad & pinned & (resid < 0)):
                raise RangeExceeded("flow goes deeper than the w cap")
            raise NonConvergence("flow solve failed to meet its residual tolerance")
        return d

    def flow_shift_z(self, t, z):
        """The log-space increment ln f^t(x) - ln x (vectorized, exact at depth)."""
        return self._solve_shift(z, t)

    def flow_z(self, t, z):
        """f^t at z = ln x (vectorized in both arguments)."""
        z = np.asarray(z, dtype=np.float64)
        return z + self._solve_shift(z, t)

    def flow(self, t, p):
        """Flow point f^t(x)."""
        return LogCoord(float(self.flow_z(float(t), np.array([p.z]))[0]))

    def flow_derivative_z(self, t, z):
        """Df^t = X(f^t x)/X(x) at z = ln x (vectorized)."""
        z = np.asarray(z, dtype=np.float64)
        d = self._solve_shift(z, t)
        phi_from = time_density(self.spec, z)
        phi_to = time_density(self.spec, z + d)
        return np.exp(d) * phi_from / phi_to

    def flow_derivative(self, t, p):
        return float(self.flow_derivative_z(float(t), np.array([p.z]))[0])

    def tau_inv_z(self, t):
        """Inverse time map (vectorized over t >= 0)."""
        t = np.asarray(t, dtype=np.float64)
        base = np.full(t.shape, self.base.z)
        return base + self._solve_shift(base, t)

    def tau_inv(self, t):
        """Point x with tau(x) = t."""
        return LogCoord(float(self.tau_inv_z(np.array([float(t)]))[0]))


def tau(cache, p):
    return cache.tau(p)


def tau_inv(cache, t):
    return cache.tau_inv(t)


def flow(cache, t, p):
    return cache.flow(t, p)


def flow_derivative(cache, t, p):
    return cache.flow_derivative(t, p)
