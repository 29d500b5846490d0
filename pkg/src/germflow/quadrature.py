"""Adaptive quadrature in log coordinates and tail sampling toward 0.

Integrals over (0, delta] are always taken in the z = ln x variable (or in
w = ln|ln x| for the variation module), never in x: a density f with respect
to dx becomes f * e^z with respect to dz, which is bounded for every
integrand arising here.  The engine is a batched adaptive Gauss-Kronrod
(G7, K15) bisection: a panel is accepted once its error estimate falls below
the tolerance scaled by the panel's share of the interval.  Accepted panels
are summed in left-to-right order, so results are deterministic.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BudgetExceeded, InsufficientSamples, NonFiniteError
from .logcoord import LogCoord

__all__ = ["Integrand", "QuadResult", "TailSamples", "integrate", "integrate_1d", "tail_sequence"]

# Gauss-Kronrod (7, 15) nodes/weights on [-1, 1], ascending; the embedded
# Gauss-7 nodes sit at the odd positions.
_XGK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])

DEFAULT_TOL_PER_UNIT = 1e-9
DEFAULT_MAX_EVALS = 10_000_000


@dataclass(frozen=True)
class Integrand:
    """Evaluator plus a coordinate tag.

    `evaluator` maps an ndarray of z = ln x values to density values.  With
    coordinate "x" it is a density with respect to dx (the engine multiplies
    by the Jacobian e^z); with coordinate "z" it is already the density with
    respect to dz = dx/x.
    """

    evaluator: Callable
    coordinate: str = "x"

    def __post_init__(self):
        if self.coordinate not in ("x", "z"):
            raise ValueError(f"coordinate must be 'x' or 'z', got {self.coordinate!r}")

    def density_z(self, z):
        vals = np.asarray(self.evaluator(z), dtype=np.float64)
        if self.coordinate == "x":
            vals = vals * np.exp(z)
        return vals


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def integrate_1d(g, lo, hi, tol, max_evals=DEFAULT_MAX_EVALS, max_width=None):
    """Adaptive GK15 of a vectorized density g over [lo, hi].

    `tol` is the absolute target for the whole interval.  Returns a
    QuadResult; raises BudgetExceeded / NonFiniteError.
    """
    lo = float(lo)
    hi = float(hi)
    if hi <= lo:
        return QuadResult(0.0, 0.0, 0)
    total = hi - lo
    if max_width is not None and max_width > 0 and total > max_width:
        n0 = int(np.ceil(total / max_width))
        edges = np.linspace(lo, hi, n0 + 1)
        los, his = edges[:-1], edges[1:]
    else:
        los = np.array([lo])
        his = np.array([hi])

    acc_lo, acc_val, acc_err = [], [], []
    n_eval = 0
    min_width = 1e-14 * max(abs(lo), abs(hi), 1.0)
    while los.size:
        n_eval += los.size * 15
        if n_eval > max_evals:
            raise BudgetExceeded(
                f"quadrature exceeded {max_evals} evaluations on [{lo:.6g}, {hi:.6g}]"
            )
        mid = 0.5 * (los + his)
        half = 0.5 * (his - los)
        nodes = mid[:, None] + half[:, None] * _XGK[None, :]
        vals = np.asarray(g(nodes.ravel()), dtype=np.float64).reshape(nodes.shape)
        if not np.all(np.isfinite(vals)):
            bad = nodes.ravel()[~np.isfinite(vals.ravel())][0]
            raise NonFiniteError(f"integrand non-finite at {bad!r}")
        k15 = (vals @ _WGK) * half
        g7 = (vals[:, 1::2] @ _WG) * half
        err = np.abs(k15 - g7)
        width = his - los
        # splitting below the roundoff floor of the panel cannot help
        floor = 100.0 * np.finfo(float).eps * (np.abs(vals) @ _WGK) * half
        done = (err <= np.maximum(tol * (width / total), floor)) | (width <= min_width)
        if np.any(done):
            acc_lo.append(los[done])
            acc_val.append(k15[done])
            acc_err.append(err[done])
        if np.all(done):
            break
        los, his, mid = los[~done], his[~done], mid[~done]
        los = np.concatenate([los, mid])
        his = np.concatenate([mid, his])

    alo = np.concatenate(acc_lo)
    aval = np.concatenate(acc_val)
    aerr = np.concatenate(acc_err)
    order = np.argsort(alo, kind="stable")
    value = float(np.sum(aval[order]))
    est = float(np.sum(aerr[order])) + 50.0 * np.finfo(float).eps * float(np.sum(np.abs(aval)))
    return QuadResult(value, est, n_eval)


def integrate(f, a, b, tol=None, max_evals=DEFAULT_MAX_EVALS, max_width=None):
    """Integral of f over [a, b] (a < b in x), carried out in z.

    Default tolerance is 1e-9 per unit of z-length.
    """
    if a.z >= b.z:
        if a.z == b.z:
            return QuadResult(0.0, 0.0, 0)
        raise ValueError("integration bounds must satisfy a < b in x")
    if tol is None:
        tol = DEFAULT_TOL_PER_UNIT * max(1.0, b.z - a.z)
    return integrate_1d(f.density_z, a.z, b.z, tol, max_evals=max_evals, max_width=max_width)


@dataclass(frozen=True)
class TailSamples:
    """Samples of a quantity along a w = ln|ln eps| grid toward the origin.

    For cumulative integrals, values[j] = integral over [eps_j, delta] with
    w_grid[j] = ln|ln eps_j|; w_grid is strictly increasing.
    """

    w_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w_grid, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if w.ndim != 1 or w.shape != v.shape:
            raise ValueError("w_grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(w) <= 0.0):
            raise ValueError("w_grid must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise NonFiniteError("tail samples must be finite")
        object.__setattr__(self, "w_grid", w)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.w_grid.size


def tail_sequence(f, delta, w_max, n, tol=None):
    """Cumulative tail integrals I(eps_j) = int_{eps_j}^{delta} f.

    The grid puts w_j = ln|ln eps_j| equally spaced on [w(delta), w_max]
    (so values[0] = 0); each panel between consecutive eps_j is integrated
    once and partial sums are reused.
    """
    if n < 8:
        raise InsufficientSamples(f"tail_sequence needs n >= 8, got {n}")
    w0 = delta.w
    if not w_max > w0:
        raise ValueError(f"w_max must exceed w(delta) = {w0:.6g}")
    w = np.linspace(w0, w_max, int(n))
    z_edges = -np.exp(w)
    values = np.zeros(int(n))
    acc = 0.0
    for j in range(1, int(n)):
        res = integrate(f, LogCoord(z_edges[j]), LogCoord(z_edges[j - 1]), tol=tol)
        acc += res.value
        values[j] = acc
    return TailSamples(w, values)
