# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit kernels. Semantics mirror ``_pykernels`` exactly."""
import numpy as np

from libc.math cimport isfinite

from .errors import DomainError, NumericError


def logistic_orbit(double x0, double mu, Py_ssize_t count, Py_ssize_t burn_in):
    cdef Py_ssize_t i, n = burn_in + count, failed = -1
    cdef double x = x0
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            if not (0.0 < x < 1.0):
                failed = i
                break
            x = mu * x * (1.0 - x)
            if i >= burn_in:
                o[i - burn_in] = x
    if failed >= 0:
        raise DomainError(f"logistic state {x!r} left (0, 1) at step {failed}")
    return out


def duffing_orbit(double x0, double y0, double a, double b,
                  Py_ssize_t count, Py_ssize_t burn_in):
    cdef Py_ssize_t i, n = burn_in + count, failed = -1
    cdef double x = x0, y = y0, t
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            t = y
            y = -b * x + a * y - y * y * y
            x = t
            if not isfinite(y):
                failed = i
                break
            if i >= burn_in:
                o[i - burn_in] = y
    if failed >= 0:
        raise NumericError(f"Duffing orbit diverged at step {failed}")
    return out, x, y
