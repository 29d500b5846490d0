import math

import numpy as np
import pytest
from hypothesis import settings

from germflow import FieldSpec, LogCoord
from germflow.fields import eval_X_z

settings.register_profile("ci", deadline=None, max_examples=50)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def linear():
    return FieldSpec("linear")


@pytest.fixture(scope="session")
def xalpha1():
    return FieldSpec("xalpha", alpha=1.0)


def fd_derivative(spec, z, rel_step=1e-6):
    """Central finite difference of X at step x * rel_step (the spec oracle)."""
    z = np.asarray(z, dtype=np.float64)
    zp = z + np.log1p(rel_step)
    zm = z + np.log1p(-rel_step)
    xp = np.exp(zp)
    xm = np.exp(zm)
    return (eval_X_z(spec, zp, checked=False) - eval_X_z(spec, zm, checked=False)) / (xp - xm)


def point(z):
    return LogCoord(float(z))


E = math.e
