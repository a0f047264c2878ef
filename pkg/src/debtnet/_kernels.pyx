# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float kernels for clearing computations.

Same semantics as the float path of ``_kernels_py``: fictitious default with
dense partial-pivot elimination, Picard fallback on a singular system.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

from .errors import ConvergenceError

cnp.import_array()

cdef double PICARD_TOL = 1e-12
cdef int PICARD_CAP = 10000
cdef double PIVOT_EPS = 1e-13


cdef void _inflows(double[:, ::1] pi, double[::1] p, double[::1] out) noexcept nogil:
    cdef Py_ssize_t n = p.shape[0], i, j
    cdef double pj
    for i in range(n):
        out[i] = 0.0
    for j in range(n):
        pj = p[j]
        if pj == 0.0:
            continue
        for i in range(n):
            out[i] += pi[j, i] * pj


cdef int _solve(double[:, ::1] M, Py_ssize_t m, double[::1] x) noexcept nogil:
    """Solve the augmented m x (m+1) system in place. Returns 0 or -1 if singular."""
    cdef Py_ssize_t c, r, k, piv
    cdef double best, f, s, tmp
    for c in range(m):
        piv = c
        best = fabs(M[c, c])
        for r in range(c + 1, m):
            if fabs(M[r, c]) > best:
                best = fabs(M[r, c])
                piv = r
        if best < PIVOT_EPS:
            return -1
        if piv != c:
            for k in range(m + 1):
                tmp = M[c, k]
                M[c, k] = M[piv, k]
                M[piv, k] = tmp
        for r in range(c + 1, m):
            f = M[r, c]
            if f == 0.0:
                continue
            f = f / M[c, c]
            for k in range(c, m + 1):
                M[r, k] -= f * M[c, k]
    for c in range(m - 1, -1, -1):
        s = M[c, m]
        for k in range(c + 1, m):
            s -= M[c, k] * x[k]
        x[c] = s / M[c, c]
    return 0


def phi_vector(e, pi, L, double alpha, double beta, p, double tol=0.0):
    cdef double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef double[:, ::1] piv = np.ascontiguousarray(pi, dtype=np.float64)
    cdef double[::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef Py_ssize_t n = ev.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double[::1] inc = np.empty(n, dtype=np.float64)
    _inflows(piv, pv, inc)
    for i in range(n):
        if Lv[i] <= ev[i] + inc[i] + tol:
            ov[i] = Lv[i]
        else:
            ov[i] = alpha * ev[i] + beta * inc[i]
    return out


def greatest_vector(e, pi, L, double alpha, double beta, double tol=0.0):
    """Greatest clearing vector of outgoing totals (float)."""
    cdef double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef double[:, ::1] piv = np.ascontiguousarray(pi, dtype=np.float64)
    cdef double[::1] Lv = np.ascontiguousarray(L, dtype=np.float64)
    cdef Py_ssize_t n = ev.shape[0], i, j, r, m, rounds, k
    out = np.array(Lv, dtype=np.float64, copy=True)
    cdef double[::1] p = out
    cdef double[::1] inc = np.empty(n, dtype=np.float64)
    cdef unsigned char[::1] D = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t[::1] idx = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] pos = np.empty(n, dtype=np.intp)
    cdef double[:, ::1] M = np.empty((n, n + 1), dtype=np.float64)
    cdef double[::1] x = np.empty(n, dtype=np.float64)
    cdef bint grew
    cdef double w, rhs
    cdef int status = 0
    with nogil:
        for rounds in range(n + 1):
            _inflows(piv, p, inc)
            grew = False
            for i in range(n):
                if D[i] == 0 and Lv[i] > 0.0 and ev[i] + inc[i] < Lv[i] - tol:
                    D[i] = 1
                    grew = True
            if not grew:
                break
            m = 0
            for i in range(n):
                if D[i]:
                    idx[m] = i
                    pos[i] = m
                    m += 1
                else:
                    pos[i] = -1
            for r in range(m):
                i = idx[r]
                for k in range(m + 1):
                    M[r, k] = 0.0
                M[r, r] = 1.0
                rhs = alpha * ev[i]
                for j in range(n):
                    w = piv[j, i]
                    if w == 0.0:
                        continue
                    if pos[j] >= 0:
                        M[r, pos[j]] -= beta * w
                    else:
                        rhs += beta * w * Lv[j]
                M[r, m] = rhs
            status = _solve(M, m, x)
            if status != 0:
                break
            for i in range(n):
                p[i] = Lv[i]
            for r in range(m):
                p[idx[r]] = x[r]
    if status != 0:
        return _picard_from_full(ev, piv, Lv, alpha, beta, tol)
    return out


cdef object _picard_from_full(double[::1] e, double[:, ::1] pi, double[::1] L,
                              double alpha, double beta, double tol):
    cdef Py_ssize_t n = e.shape[0], i, it
    out = np.array(L, dtype=np.float64, copy=True)
    cdef double[::1] p = out
    cdef double[::1] q = np.empty(n, dtype=np.float64)
    cdef double[::1] inc = np.empty(n, dtype=np.float64)
    cdef double diff
    for it in range(PICARD_CAP):
        _inflows(pi, p, inc)
        diff = 0.0
        for i in range(n):
            if L[i] <= e[i] + inc[i] + tol:
                q[i] = L[i]
            else:
                q[i] = alpha * e[i] + beta * inc[i]
            if fabs(q[i] - p[i]) > diff:
                diff = fabs(q[i] - p[i])
        for i in range(n):
            p[i] = q[i]
        if diff <= PICARD_TOL:
            return out
    raise ConvergenceError(f"clearing iteration did not converge in {PICARD_CAP} steps")
