# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot-loop kernels: sum-rate and gain evaluations called tens of
thousands of times per trial inside the optimizers' line searches.

Contracts mirror fallback.py exactly (plain transposes, no conjugation).
"""

import numpy as np

from libc.math cimport log2

BACKEND = "compiled"


def cross_gains(object channels, object beamformers):
    """G[k, j] = |h_k^T w_j|^2."""
    cdef const double complex[:, ::1] h = np.ascontiguousarray(channels, dtype=np.complex128)
    cdef const double complex[:, ::1] w = np.ascontiguousarray(beamformers, dtype=np.complex128)
    cdef Py_ssize_t k = h.shape[0], m = h.shape[1], j = w.shape[1]
    out_arr = np.empty((k, j), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t a, b, c
    cdef double complex z
    for a in range(k):
        for b in range(j):
            z = 0
            for c in range(m):
                z = z + h[a, c] * w[c, b]
            out[a, b] = z.real * z.real + z.imag * z.imag
    return out_arr


def dl_sum_rate_from_gains(object gains, object powers, double noise_power):
    cdef const double[:, ::1] g = np.ascontiguousarray(gains, dtype=np.float64)
    cdef const double[::1] p = np.ascontiguousarray(powers, dtype=np.float64)
    cdef Py_ssize_t k = g.shape[0]
    cdef Py_ssize_t a, b
    cdef double total, signal, rate = 0.0
    for a in range(k):
        total = 0.0
        for b in range(k):
            total += g[a, b] * p[b]
        signal = g[a, a] * p[a]
        rate += log2(1.0 + signal / (total - signal + noise_power))
    return rate


def dl_sum_rate(object channels, object beamformers, object powers, double noise_power):
    """Fused cross-gain + sum-rate evaluation (the line-search workhorse)."""
    cdef const double complex[:, ::1] h = np.ascontiguousarray(channels, dtype=np.complex128)
    cdef const double complex[:, ::1] w = np.ascontiguousarray(beamformers, dtype=np.complex128)
    cdef const double[::1] p = np.ascontiguousarray(powers, dtype=np.float64)
    cdef Py_ssize_t k = h.shape[0], m = h.shape[1]
    cdef Py_ssize_t a, b, c
    cdef double complex z
    cdef double total, signal, gain, rate = 0.0
    for a in range(k):
        total = 0.0
        signal = 0.0
        for b in range(k):
            z = 0
            for c in range(m):
                z = z + h[a, c] * w[c, b]
            gain = (z.real * z.real + z.imag * z.imag) * p[b]
            total += gain
            if b == a:
                signal = gain
        rate += log2(1.0 + signal / (total - signal + noise_power))
    return rate


def ul_gains(object cascades, object coefficient):
    """Per-user |f^T c_k|^2."""
    cdef const double complex[:, ::1] c = np.ascontiguousarray(cascades, dtype=np.complex128)
    cdef const double complex[::1] f = np.ascontiguousarray(coefficient, dtype=np.complex128)
    cdef Py_ssize_t k = c.shape[0], m = c.shape[1]
    out_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t a, b
    cdef double complex z
    for a in range(k):
        z = 0
        for b in range(m):
            z = z + c[a, b] * f[b]
        out[a] = z.real * z.real + z.imag * z.imag
    return out_arr


def ul_objective(object cascades, object coefficient, object users, object powers,
                 double noise_power):
    cdef const double complex[:, ::1] c = np.ascontiguousarray(cascades, dtype=np.complex128)
    cdef const double complex[::1] f = np.ascontiguousarray(coefficient, dtype=np.complex128)
    cdef const long[::1] u = np.ascontiguousarray(users, dtype=np.int64)
    cdef const double[::1] p = np.ascontiguousarray(powers, dtype=np.float64)
    cdef Py_ssize_t k = c.shape[0], m = c.shape[1], n = u.shape[0]
    cdef double[::1] g = np.empty(k, dtype=np.float64)
    cdef Py_ssize_t a, b
    cdef double complex z
    cdef double rate = 0.0
    for a in range(k):
        z = 0
        for b in range(m):
            z = z + c[a, b] * f[b]
        g[a] = z.real * z.real + z.imag * z.imag
    for a in range(n):
        rate += log2(1.0 + p[a] * g[u[a]] / noise_power)
    return rate
