"""Logistic and Duffing chaotic sequences, and their conversion into
permutations and byte masks.

All iteration is plain binary64 arithmetic. The heavy lifting is done by
the orbit kernels in :mod:`chaocrypt._backend`; the scalar step functions
here are the readable definitions and are used by the tests as oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, NumericError, ShapeMismatchError

MU_MIN = 3.57
MU_MAX = 4.0
DUFFING_A = 2.75
DUFFING_B = 0.2
DEFAULT_BURN_IN = 1000
# 10 decimal digits: the key granularity the quantizer reads out
QUANT_SCALE = 1e10


def _check_mu(mu):
    if not MU_MIN <= mu <= MU_MAX:
        raise DomainError(f"mu={mu!r} outside the chaotic range [{MU_MIN}, {MU_MAX}]")


@dataclass(frozen=True)
class LogisticParams:
    mu: float
    x0: float

    def __post_init__(self):
        _check_mu(self.mu)
        if not 0.0 < self.x0 < 1.0:
            raise DomainError(f"logistic x0={self.x0!r} must lie in (0, 1)")


@dataclass(frozen=True)
class DuffingParams:
    x0: float
    y0: float
    a: float = DUFFING_A
    b: float = DUFFING_B

    def __post_init__(self):
        values = (self.x0, self.y0, self.a, self.b)
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"Duffing parameters must be finite, got {values!r}")
        if self.x0 == 0.0 and self.y0 == 0.0:
            raise DomainError("(0, 0) is a fixed point of the Duffing map")


def logistic_next(x: float, mu: float) -> float:
    """One logistic step ``mu * x * (1 - x)``."""
    if not 0.0 < x < 1.0:
        raise DomainError(f"logistic state {x!r} must lie in (0, 1)")
    _check_mu(mu)
    return mu * x * (1.0 - x)


def duffing_next(x: float, y: float, a: float = DUFFING_A, b: float = DUFFING_B) -> tuple[float, float]:
    """One step of the Holmes map ``(x, y) -> (y, -b x + a y - y^3)``."""
    ny = -b * x + a * y - y * y * y
    if not math.isfinite(ny):
        raise NumericError(f"Duffing step from ({x!r}, {y!r}) is not finite")
    return y, ny


def generate_sequence(params: LogisticParams | DuffingParams, count: int,
                      burn_in: int = DEFAULT_BURN_IN) -> np.ndarray:
    """Iterate ``burn_in`` times silently, then return ``count`` samples.

    For the Duffing map the y-component is the sample.
    """
    if count < 0 or burn_in < 0:
        raise DomainError("count and burn_in must be non-negative")
    if count == 0:
        return np.empty(0, dtype=np.float64)
    k = _backend.kernels
    if isinstance(params, LogisticParams):
        return k.logistic_orbit(params.x0, params.mu, count, burn_in)
    if isinstance(params, DuffingParams):
        return k.duffing_orbit(params.x0, params.y0, params.a, params.b, count, burn_in)[0]
    raise TypeError(f"unsupported map parameters: {type(params).__name__}")


def floats_to_permutation(samples) -> np.ndarray:
    """Stable argsort: ``perm[j]`` is the index of the j-th smallest sample."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size == 0:
        raise DomainError("cannot derive a permutation from an empty sequence")
    return np.argsort(samples, kind="stable")


def combine_streams(x_stream, y_stream) -> np.ndarray:
    """Reorder ``x_stream`` by the ascending order of ``y_stream``."""
    x_stream = np.asarray(x_stream)
    y_stream = np.asarray(y_stream)
    if x_stream.shape != y_stream.shape or x_stream.ndim != 1:
        raise ShapeMismatchError(
            f"streams must be 1-D and equally long, got {x_stream.shape} and {y_stream.shape}")
    if x_stream.size == 0:
        return x_stream.copy()
    return x_stream[floats_to_permutation(y_stream)]


def floats_to_bytes(samples) -> np.ndarray:
    """Quantize reals to bytes: ``floor(frac(|s|) * 1e10) mod 256``.

    Evaluated in float64; the product is rounded before the floor.
    """
    s = np.abs(np.asarray(samples, dtype=np.float64))
    if not np.all(np.isfinite(s)):
        raise NumericError("cannot quantize non-finite samples")
    frac = s - np.floor(s)
    return (np.floor(frac * QUANT_SCALE).astype(np.int64) & 0xFF).astype(np.uint8)
