"""Log-coordinate representation of points near the origin.

A point x in (0, 1) is carried as z = ln x, so that x down to e^{-10^4} and
far beyond stays representable (x itself would underflow float64 around
e^{-745}).  Derived accessors:

    x = e^z,   L = |ln x| = -z,   w = ln L,   v = ln w.
"""

from dataclasses import dataclass
import math

from .errors import DomainError


@dataclass(frozen=True)
class LogCoord:
    """A point of (0, 1) stored as z = ln x."""

    z: float

    def __post_init__(self):
        z = float(self.z)
        if not math.isfinite(z) or z >= 0.0:
            raise DomainError(f"log-coordinate must be finite and negative, got z={self.z!r}")
        object.__setattr__(self, "z", z)

    @classmethod
    def from_x(cls, x):
        if not (0.0 < x < 1.0):
            raise DomainError(f"x must lie in (0, 1), got {x!r}")
        return cls(math.log(x))

    @classmethod
    def from_z(cls, z):
        return cls(z)

    @classmethod
    def from_w(cls, w):
        """Point with ln|ln x| = w, i.e. z = -e^w."""
        return cls(-math.exp(w))

    @property
    def x(self):
        return math.exp(self.z)

    @property
    def L(self):
        return -self.z

    @property
    def w(self):
        if self.L <= 1.0:
            raise DomainError(f"w = ln|ln x| needs |ln x| > 1, got L={self.L}")
        return math.log(self.L)

    @property
    def v(self):
        w = self.w
        if w <= 1.0:
            raise DomainError(f"v = ln ln|ln x| needs ln|ln x| > 1, got w={w}")
        return math.log(w)

    def __repr__(self):
        return f"LogCoord(z={self.z!r})"
