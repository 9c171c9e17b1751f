# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: symbol derivatives, mechanism functions, batched bisection.

Same call signatures and results as ``_kernels_py``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sqrt, fabs

cnp.import_array()

FAMILY_CAPILLARY = 0
FAMILY_VORTICITY = 1
MECH_GROUP = 1
MECH_LONGSHORT = 2
MECH_SECOND = 3
MECH_BF = 4
PLANE_RAW = 0
PLANE_CAPILLARY = 1
PLANE_VORTICITY = 2

cdef enum:
    NTERMS = 10

cdef double CUTOFF = 0.1
SERIES_CUTOFF = CUTOFF

cdef double TANHC[NTERMS]
TANHC[:] = [
    1.0,
    -1.0 / 3.0,
    2.0 / 15.0,
    -17.0 / 315.0,
    62.0 / 2835.0,
    -1382.0 / 155925.0,
    21844.0 / 6081075.0,
    -929569.0 / 638512875.0,
    6404582.0 / 10854718875.0,
    -443861162.0 / 1856156927625.0,
]

cdef struct Triple:
    double v
    double d1
    double d2


cdef inline Triple _tanhc(double z) noexcept nogil:
    cdef Triple r
    cdef double z2, c, q, th, sech2
    cdef int j
    z = fabs(z)
    if z < CUTOFF:
        z2 = z * z
        r.v = 0.0
        r.d1 = 0.0
        r.d2 = 0.0
        for j in range(NTERMS - 1, -1, -1):
            c = TANHC[j]
            r.v = r.v * z2 + c
            if j >= 1:
                r.d1 = r.d1 * z2 + 2 * j * c
                r.d2 = r.d2 * z2 + 2 * j * (2 * j - 1) * c
        r.d1 = r.d1 * z
        return r
    q = exp(-2.0 * z)
    th = (1.0 - q) / (1.0 + q)
    sech2 = 4.0 * q / ((1.0 + q) * (1.0 + q))
    r.v = th / z
    r.d1 = sech2 / z - th / (z * z)
    r.d2 = -2.0 * th * sech2 / z - 2.0 * sech2 / (z * z) + 2.0 * th / (z * z * z)
    return r


cdef inline Triple _sqrt_derivs(double P, double P1, double P2) noexcept nogil:
    cdef Triple r
    r.v = sqrt(P)
    r.d1 = P1 / (2.0 * r.v)
    r.d2 = (2.0 * P * P2 - P1 * P1) / (4.0 * P * r.v)
    return r


cdef inline Triple _symbol(int family, double p, double sign, double z) noexcept nogil:
    cdef Triple t, r, out
    cdef double g, w2, h
    z = fabs(z)
    t = _tanhc(z)
    if family == 0:
        g = 1.0 + p * z * z
        return _sqrt_derivs(g * t.v,
                            2.0 * p * z * t.v + g * t.d1,
                            2.0 * p * t.v + 4.0 * p * z * t.d1 + g * t.d2)
    w2 = p * p / 4.0
    r = _sqrt_derivs(t.v + w2 * t.v * t.v,
                     t.d1 + 2.0 * w2 * t.v * t.d1,
                     t.d2 + 2.0 * w2 * (t.d1 * t.d1 + t.v * t.d2))
    h = p / 2.0
    out.v = h * t.v + sign * r.v
    out.d1 = h * t.d1 + sign * r.d1
    out.d2 = h * t.d2 + sign * r.d2
    return out


cdef inline double _m0(int family, double p, double sign) noexcept nogil:
    if family == 0:
        return 1.0
    return p / 2.0 + sign * sqrt(1.0 + p * p / 4.0)


cdef inline double _mechanism(int family, double sign, int mech, double z, double p) noexcept nogil:
    cdef Triple s = _symbol(family, p, sign, z)
    cdef double m0, mm
    if mech == 1:
        return 2.0 * s.d1 + z * s.d2
    m0 = _m0(family, p, sign)
    if mech == 2:
        return s.v + z * s.d1 - m0
    mm = _symbol(family, p, sign, 2.0 * z).v
    if mech == 3:
        return s.v - mm
    return 2.0 * (s.v - mm) + (s.v + z * s.d1 - m0)


cdef inline double _plane_value(int plane, int family, double sign, int mech,
                                double x, double y) noexcept nogil:
    if plane == 0:
        return _mechanism(family, sign, mech, x, y)
    if plane == 1:
        return _mechanism(family, sign, mech, x, (y / x) * (y / x))
    return _mechanism(family, sign, mech, y, x)


cdef inline double _sgn(double v) noexcept nogil:
    if v > 0:
        return 1.0
    if v < 0:
        return -1.0
    return 0.0


def symbol_derivs(int family, p, double sign, z):
    zf = np.asarray(z, dtype=np.float64)
    shape = np.broadcast(zf, np.asarray(p, dtype=np.float64)).shape
    cdef cnp.ndarray[cnp.float64_t, ndim=1] zz = np.ascontiguousarray(
        np.broadcast_to(zf, shape), dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pp = np.ascontiguousarray(
        np.broadcast_to(np.asarray(p, dtype=np.float64), shape), dtype=np.float64).ravel()
    cdef Py_ssize_t n = zz.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m1 = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m2 = np.empty(n)
    cdef Triple s
    with nogil:
        for i in range(n):
            s = _symbol(family, pp[i], sign, zz[i])
            m[i] = s.v
            m1[i] = s.d1
            m2[i] = s.d2
    return m.reshape(shape), m1.reshape(shape), m2.reshape(shape)


def symbol_at_zero(int family, p, double sign):
    p = np.asarray(p, dtype=np.float64)
    if family == 0:
        return np.ones_like(p)
    return p / 2.0 + sign * np.sqrt(1.0 + p * p / 4.0)


def mechanism_values(int plane, int family, double sign, int mech, x, y):
    if mech not in (1, 2, 3, 4):
        raise ValueError(f"unknown mechanism code {mech!r}")
    if plane not in (0, 1, 2):
        raise ValueError(f"unknown plane code {plane!r}")
    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=np.float64),
                                 np.asarray(y, dtype=np.float64))
    shape = xb.shape
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xx = np.ascontiguousarray(xb).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yy = np.ascontiguousarray(yb).ravel()
    cdef Py_ssize_t n = xx.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    with nogil:
        for i in range(n):
            out[i] = _plane_value(plane, family, sign, mech, xx[i], yy[i])
    return out.reshape(shape)


def bisect_segments(int plane, int family, double sign, int mech,
                    x0, y0, x1, y1, double tol=1e-12, int maxiter=200):
    if mech not in (1, 2, 3, 4):
        raise ValueError(f"unknown mechanism code {mech!r}")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ax = np.ascontiguousarray(x0, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ay = np.ascontiguousarray(y0, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bx = np.ascontiguousarray(x1, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] by = np.ascontiguousarray(y1, dtype=np.float64).ravel()
    cdef Py_ssize_t n = ax.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rx = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ry = np.empty(n)
    cdef double lo, hi, mid, flo, dx, dy
    cdef int it
    with nogil:
        for i in range(n):
            dx = bx[i] - ax[i]
            dy = by[i] - ay[i]
            lo = 0.0
            hi = 1.0
            flo = _sgn(_plane_value(plane, family, sign, mech, ax[i], ay[i]))
            for it in range(maxiter):
                if hi - lo <= tol:
                    break
                mid = 0.5 * (lo + hi)
                if _sgn(_plane_value(plane, family, sign, mech,
                                     ax[i] + mid * dx, ay[i] + mid * dy)) == flo:
                    lo = mid
                else:
                    hi = mid
            mid = 0.5 * (lo + hi)
            rx[i] = ax[i] + mid * dx
            ry[i] = ay[i] + mid * dy
    return rx, ry
