# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_core_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)


def exp_kernel_apply(x, w, f, kappa):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double complex[:, ::1] fv = np.ascontiguousarray(f, dtype=np.complex128)
    cdef Py_ssize_t n = xv.shape[0], d = fv.shape[1], i, a
    cdef double complex k = kappa
    cdef double complex step
    left_arr = np.zeros((n, d), dtype=np.complex128)
    right_arr = np.zeros((n, d), dtype=np.complex128)
    cdef double complex[:, ::1] left = left_arr
    cdef double complex[:, ::1] right = right_arr
    with nogil:
        for i in range(1, n):
            step = cexp(1j * k * (xv[i] - xv[i - 1]))
            for a in range(d):
                left[i, a] = step * (left[i - 1, a] + wv[i - 1] * fv[i - 1, a])
        for i in range(n - 2, -1, -1):
            step = cexp(1j * k * (xv[i + 1] - xv[i]))
            for a in range(d):
                right[i, a] = step * (right[i + 1, a] + wv[i + 1] * fv[i + 1, a])
    return left_arr, right_arr


def hs_sum(x, w, even, odd, kappa, P, Q, chunk=None):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double complex[:, :, ::1] ev = np.ascontiguousarray(
        np.reshape(even, (-1, 2, 2)), dtype=np.complex128)
    cdef double complex[:, :, ::1] ov = np.ascontiguousarray(
        np.reshape(odd, (-1, 2, 2)), dtype=np.complex128)
    cdef double complex[::1] kv = np.ascontiguousarray(
        np.reshape(kappa, (-1,)), dtype=np.complex128)
    cdef double complex[:, :, ::1] Pv = np.ascontiguousarray(P, dtype=np.complex128)
    cdef double complex[:, :, ::1] Qv = np.ascontiguousarray(Q, dtype=np.complex128)
    cdef Py_ssize_t n = xv.shape[0], T = kv.shape[0], r = Pv.shape[2]
    cdef Py_ssize_t i, j, t, a, b, q
    cdef double dd, ad, sg, sq, row, total = 0.0
    cdef double complex e, m
    cdef double complex blk[2][2]
    with nogil:
        for i in range(n):
            row = 0.0
            for j in range(n):
                dd = xv[i] - xv[j]
                ad = fabs(dd)
                sg = 1.0 if dd > 0 else (-1.0 if dd < 0 else 0.0)
                for a in range(2):
                    for b in range(2):
                        m = 0
                        for q in range(r):
                            m = m + Pv[i, a, q] * Qv[j, q, b]
                        blk[a][b] = m
                for t in range(T):
                    e = cexp(1j * kv[t] * ad)
                    for a in range(2):
                        for b in range(2):
                            blk[a][b] = blk[a][b] + (ev[t, a, b] + sg * ov[t, a, b]) * e
                sq = 0.0
                for a in range(2):
                    for b in range(2):
                        sq = sq + blk[a][b].real * blk[a][b].real + blk[a][b].imag * blk[a][b].imag
                row = row + wv[j] * sq
            total = total + wv[i] * row
    return total
