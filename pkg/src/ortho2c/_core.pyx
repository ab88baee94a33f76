# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels.

Same contracts as ``_core_py``; selected at import by ``ortho2c._accel``.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def monomial_table(z, int degree):
    cdef const double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef Py_ssize_t npts = zv.shape[0]
    cdef Py_ssize_t ncol = (degree + 1) * (degree + 2) // 2
    out = np.empty((npts, ncol), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef double complex[::1] pz = np.empty(degree + 1, dtype=np.complex128)
    cdef double complex[::1] pzb = np.empty(degree + 1, dtype=np.complex128)
    cdef Py_ssize_t i, p, m, k, col
    cdef double complex zi, zbi
    for i in range(npts):
        zi = zv[i]
        zbi = zi.conjugate()
        pz[0] = 1.0
        pzb[0] = 1.0
        for p in range(1, degree + 1):
            pz[p] = pz[p - 1] * zi
            pzb[p] = pzb[p - 1] * zbi
        col = 0
        for m in range(degree + 1):
            for k in range(m + 1):
                ov[i, col] = pz[m - k] * pzb[k]
                col += 1
    return out


def eval_terms(a, b, coeff, z):
    cdef const long long[::1] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef const long long[::1] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef const double complex[::1] cv = np.ascontiguousarray(coeff, dtype=np.complex128)
    cdef const double complex[::1] zv = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef Py_ssize_t nterm = av.shape[0]
    cdef Py_ssize_t npts = zv.shape[0]
    out = np.zeros(npts, dtype=np.complex128)
    if nterm == 0:
        return out
    cdef double complex[::1] ov = out
    cdef Py_ssize_t t, i, p
    cdef long long top = 0
    for t in range(nterm):
        if av[t] > top:
            top = av[t]
        if bv[t] > top:
            top = bv[t]
    cdef double complex[::1] pz = np.empty(top + 1, dtype=np.complex128)
    cdef double complex[::1] pzb = np.empty(top + 1, dtype=np.complex128)
    cdef double complex zi, zbi, acc
    for i in range(npts):
        zi = zv[i]
        zbi = zi.conjugate()
        pz[0] = 1.0
        pzb[0] = 1.0
        for p in range(1, top + 1):
            pz[p] = pz[p - 1] * zi
            pzb[p] = pzb[p - 1] * zbi
        acc = 0.0
        for t in range(nterm):
            acc = acc + cv[t] * pz[av[t]] * pzb[bv[t]]
        ov[i] = acc
    return out
