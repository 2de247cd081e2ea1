"""Pure-Python orbit kernels.

Reference semantics for ``_kernels.pyx``; both must produce bit-identical
float64 output, so keep the arithmetic in the same order in both files.
"""
import math

import numpy as np

from .errors import DomainError, NumericError


def logistic_orbit(x0, mu, count, burn_in):
    out = np.empty(count, dtype=np.float64)
    x = float(x0)
    mu = float(mu)
    for i in range(burn_in + count):
        if not 0.0 < x < 1.0:
            raise DomainError(f"logistic state {x!r} left (0, 1) at step {i}")
        x = mu * x * (1.0 - x)
        if i >= burn_in:
            out[i - burn_in] = x
    return out


def duffing_orbit(x0, y0, a, b, count, burn_in):
    """Return ``(samples, x, y)``; samples are the y-components after burn-in."""
    out = np.empty(count, dtype=np.float64)
    x = float(x0)
    y = float(y0)
    a = float(a)
    b = float(b)
    for i in range(burn_in + count):
        x, y = y, -b * x + a * y - y * y * y
        if not math.isfinite(y):
            raise NumericError(f"Duffing orbit diverged at step {i}")
        if i >= burn_in:
            out[i - burn_in] = y
    return out, x, y
