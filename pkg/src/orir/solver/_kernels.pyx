# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex kernels.

Mirrors orir.solver._kernels_py element by element; keep both files in
sync. Built with -ffp-contract=off so the arithmetic rounds exactly like
the numpy fallback.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF NB_LOWER = 0
DEF NB_UPPER = 1
DEF BASIC = 2
DEF NB_FIXED = 3

cdef double INF = float("inf")


def pivot_update(double[:, ::1] binv, double[::1] w, Py_ssize_t r):
    """Eta update of the dense basis inverse for a pivot in row r."""
    cdef Py_ssize_t m = binv.shape[0]
    cdef Py_ssize_t k = binv.shape[1]
    cdef double alpha = w[r]
    cdef Py_ssize_t i, j
    cdef double wi
    for j in range(k):
        binv[r, j] /= alpha
    for i in range(m):
        if i == r:
            continue
        wi = w[i]
        if wi == 0.0:
            continue
        for j in range(k):
            binv[i, j] -= wi * binv[r, j]


def ftran(double[:, ::1] binv, long long[::1] idx, double[::1] vals):
    """w = B^-1 a for a sparse column a."""
    cdef Py_ssize_t m = binv.shape[0]
    cdef Py_ssize_t nnz = idx.shape[0]
    w_arr = np.zeros(m)
    cdef double[::1] w = w_arr
    cdef Py_ssize_t i, j
    cdef double v
    cdef Py_ssize_t col
    for j in range(nnz):
        col = <Py_ssize_t> idx[j]
        v = vals[j]
        for i in range(m):
            w[i] += binv[i, col] * v
    return w_arr


def primal_ratio(double[::1] dirw, double[::1] beta, double[::1] lb_b,
                 double[::1] ub_b, double piv_tol):
    """Bounded ratio test; ties break to the lowest row index."""
    cdef Py_ssize_t m = beta.shape[0]
    cdef Py_ssize_t r, best_row = -1
    cdef double a, t, best_t = INF
    cdef int hit, best_hit = 0
    for r in range(m):
        a = dirw[r]
        if a > piv_tol:
            t = (beta[r] - lb_b[r]) / a
            hit = 0
        elif a < -piv_tol:
            if ub_b[r] == INF:
                continue
            t = (ub_b[r] - beta[r]) / (-a)
            hit = 1
        else:
            continue
        if t < 0.0:
            t = 0.0
        if t < best_t:
            best_t = t
            best_row = r
            best_hit = hit
    return best_row, best_t, best_hit


def dual_ratio(double[::1] alpha_row, double[::1] d, signed char[::1] status,
               int leave_dir, double piv_tol):
    """Entering-column selection for the dual simplex; -1 if none."""
    cdef Py_ssize_t n = alpha_row.shape[0]
    cdef Py_ssize_t j, best_j = -1
    cdef double a, ratio, best_ratio = INF
    cdef signed char s
    for j in range(n):
        s = status[j]
        if s == BASIC or s == NB_FIXED:
            continue
        a = leave_dir * alpha_row[j]
        if s == NB_LOWER:
            if not (a < -piv_tol):
                continue
        else:
            if not (a > piv_tol):
                continue
        ratio = abs(d[j]) / abs(alpha_row[j])
        if ratio < best_ratio:
            best_ratio = ratio
            best_j = j
    return best_j


def price(double[::1] d, signed char[::1] status, double dtol, bint bland):
    """Entering-variable selection for the primal simplex."""
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j, best_j = -1
    cdef double mag, best_mag = dtol
    cdef signed char s
    for j in range(n):
        s = status[j]
        if s == NB_LOWER:
            mag = -d[j]
        elif s == NB_UPPER:
            mag = d[j]
        else:
            continue
        if mag > best_mag:
            if bland:
                return j
            best_mag = mag
            best_j = j
    return best_j
