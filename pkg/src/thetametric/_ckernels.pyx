# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``_pykernels``."""
from libc.math cimport pow, sqrt, floor, fabs, copysign, NAN, fmax

import numpy as np

cdef enum:
    K_SUM = 0
    K_SUM_PROD = 1
    PROD_OVER_ONE_PLUS_PROD = 2
    ROOT_SUM_POWER = 3
    SUM_PLUS_PROD = 4
    SUM_PLUS_SQRT_PROD = 5
    SUM_TIMES_ONE_PLUS_PROD = 6


cdef inline double _signed_root(double v, double n) nogil:
    if n == 1.0:
        return v
    if v < 0.0:
        return -pow(-v, 1.0 / n)
    return pow(v, 1.0 / n)


cdef double _theta(int kind, double p, double s, double t) except? -1.0:
    cdef double q, v, tmp, m, a, b
    if t < s:
        tmp = s
        s = t
        t = tmp
    if kind == K_SUM:
        return p * (s + t)
    if kind == K_SUM_PROD:
        return p * (s + t + s * t)
    if kind == PROD_OVER_ONE_PLUS_PROD:
        q = s * t
        return q / (1.0 + q)
    if kind == ROOT_SUM_POWER:
        m = fmax(fabs(s), fabs(t))
        if m == 0.0:
            return 0.0
        a = s / m
        b = t / m
        if a >= 0.0 and b >= 0.0:
            v = pow(a, p) + pow(b, p)
        elif p == floor(p) and (<long long>p) % 2 == 1:
            v = copysign(pow(fabs(a), p), a) + copysign(pow(fabs(b), p), b)
        else:
            v = NAN
        return m * _signed_root(v, p)
    if kind == SUM_PLUS_PROD:
        return s + t + s * t
    if kind == SUM_PLUS_SQRT_PROD:
        q = s * t
        return s + t + (sqrt(q) if q >= 0.0 else NAN)
    if kind == SUM_TIMES_ONE_PLUS_PROD:
        return (s + t) * (1.0 + s * t)
    raise ValueError(f"unknown kind code {kind}")


def theta(int kind, double p, double s, double t):
    return _theta(kind, p, s, t)


def bisect_callable(g, double r, double lo, double hi, int max_iter):
    cdef double glo = g(lo), ghi, mid, gm
    cdef int it
    if glo >= r:
        return lo
    ghi = g(hi)
    if ghi == r:
        return hi
    for it in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = g(mid)
        if gm == r:
            return mid
        if gm < r:
            lo = mid
            glo = gm
        else:
            hi = mid
            ghi = gm
    return lo if r - glo <= ghi - r else hi


def bisect_kind(int kind, double p, double r, double s, double lo, double hi, int max_iter):
    cdef double glo = _theta(kind, p, lo, s), ghi, mid, gm
    cdef int it
    if glo >= r:
        return lo
    ghi = _theta(kind, p, hi, s)
    if ghi == r:
        return hi
    for it in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        gm = _theta(kind, p, mid, s)
        if gm == r:
            return mid
        if gm < r:
            lo = mid
            glo = gm
        else:
            hi = mid
            ghi = gm
    return lo if r - glo <= ghi - r else hi


def a3_scan(dist, int kind, double p, double rel_tol):
    cdef const double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0], i, j, k
    cdef double lhs, rhs
    out = []
    for i in range(n):
        for j in range(n):
            lhs = d[i, j]
            for k in range(n):
                rhs = _theta(kind, p, d[i, k], d[k, j])
                if not lhs <= rhs + rel_tol * fmax(fabs(lhs), fabs(rhs)):
                    out.append((i, j, k, lhs, rhs))
    return out
