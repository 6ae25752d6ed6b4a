# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: confusion tallies and Epanechnikov density sums."""

from libc.math cimport sqrt

import numpy as np


def confusion_counts(const signed char[:, ::1] sim, const signed char[:, ::1] obs):
    """Tally (tp, fp, fn, tn) over cells non-excluded (>= 0) in both rasters."""
    cdef Py_ssize_t r, c
    cdef Py_ssize_t rows = sim.shape[0], cols = sim.shape[1]
    cdef long tp = 0, fp = 0, fn = 0, tn = 0
    cdef signed char s, o
    for r in range(rows):
        for c in range(cols):
            s = sim[r, c]
            o = obs[r, c]
            if s < 0 or o < 0:
                continue
            if s == 1:
                if o == 1:
                    tp += 1
                else:
                    fp += 1
            else:
                if o == 1:
                    fn += 1
                else:
                    tn += 1
    return tp, fp, fn, tn


def epanechnikov_density(const double[::1] x, const double[::1] samples, double h):
    """Kernel density estimate at points `x`; same contract as the fallback."""
    cdef Py_ssize_t i, j
    cdef Py_ssize_t m = x.shape[0], n = samples.shape[0]
    cdef double s5 = sqrt(5.0)
    cdef double c0 = 3.0 / (4.0 * s5)
    cdef double z, acc, scale
    out_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    if n == 0:
        return out_arr
    scale = c0 / (n * h)
    for i in range(m):
        acc = 0.0
        for j in range(n):
            z = (x[i] - samples[j]) / h
            if z >= -s5 and z <= s5:
                acc += 1.0 - z * z / 5.0
        out[i] = acc * scale
    return out_arr
