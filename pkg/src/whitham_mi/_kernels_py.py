"""Pure numpy implementation of the numerical kernels.

Mirrors ``_kernels.pyx`` function for function; selected automatically when
the compiled extension is unavailable (see ``whitham_mi._backend``).
"""
import numpy as np

FAMILY_CAPILLARY = 0
FAMILY_VORTICITY = 1

MECH_GROUP = 1
MECH_LONGSHORT = 2
MECH_SECOND = 3
MECH_BF = 4

PLANE_RAW = 0
PLANE_CAPILLARY = 1
PLANE_VORTICITY = 2

SERIES_CUTOFF = 0.1

# tanh(z)/z = sum_j TANHC[j] z^(2j)
TANHC = np.array([
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
])


def tanhc_series(z):
    """t, t', t'' of t(z) = tanh(z)/z from the Maclaurin series."""
    z = np.asarray(z, dtype=float)
    z2 = z * z
    t = np.zeros_like(z)
    t1 = np.zeros_like(z)
    t2 = np.zeros_like(z)
    for j in range(len(TANHC) - 1, -1, -1):
        c = TANHC[j]
        t = t * z2 + c
        if j >= 1:
            t1 = t1 * z2 + 2 * j * c
            t2 = t2 * z2 + 2 * j * (2 * j - 1) * c
    return t, t1 * z, t2


def tanhc_closed(z):
    """t, t', t'' of t(z) = tanh(z)/z in closed form (z > 0)."""
    z = np.asarray(z, dtype=float)
    q = np.exp(-2.0 * z)
    th = (1.0 - q) / (1.0 + q)
    sech2 = 4.0 * q / (1.0 + q) ** 2
    t = th / z
    t1 = sech2 / z - th / (z * z)
    t2 = -2.0 * th * sech2 / z - 2.0 * sech2 / (z * z) + 2.0 * th / (z * z * z)
    return t, t1, t2


def tanhc(z):
    z = np.abs(np.asarray(z, dtype=float))
    small = z < SERIES_CUTOFF
    zs = np.where(small, z, 0.0)
    zl = np.where(small, 1.0, z)
    ts = tanhc_series(zs)
    tl = tanhc_closed(zl)
    return tuple(np.where(small, a, b) for a, b in zip(ts, tl))


def _sqrt_derivs(P, P1, P2):
    r = np.sqrt(P)
    r1 = P1 / (2.0 * r)
    r2 = (2.0 * P * P2 - P1 * P1) / (4.0 * P * r)
    return r, r1, r2


def symbol_derivs(family, p, sign, z):
    """Return (m, m', m'') at |z| for one parameter value or an array of them."""
    z = np.abs(np.asarray(z, dtype=float))
    p = np.asarray(p, dtype=float)
    t, t1, t2 = tanhc(z)
    if family == FAMILY_CAPILLARY:
        g = 1.0 + p * z * z
        P = g * t
        P1 = 2.0 * p * z * t + g * t1
        P2 = 2.0 * p * t + 4.0 * p * z * t1 + g * t2
        return _sqrt_derivs(P, P1, P2)
    w2 = p * p / 4.0
    Q = t + w2 * t * t
    Q1 = t1 + 2.0 * w2 * t * t1
    Q2 = t2 + 2.0 * w2 * (t1 * t1 + t * t2)
    r, r1, r2 = _sqrt_derivs(Q, Q1, Q2)
    h = p / 2.0
    return h * t + sign * r, h * t1 + sign * r1, h * t2 + sign * r2


def symbol_at_zero(family, p, sign):
    p = np.asarray(p, dtype=float)
    if family == FAMILY_CAPILLARY:
        return np.ones_like(p)
    return p / 2.0 + sign * np.sqrt(1.0 + p * p / 4.0)


def mechanism_at(family, sign, mech, z, p):
    """Mechanism function value at points (z, p), elementwise."""
    z = np.asarray(z, dtype=float)
    p = np.asarray(p, dtype=float)
    m, m1, m2 = symbol_derivs(family, p, sign, z)
    if mech == MECH_GROUP:
        return 2.0 * m1 + z * m2
    m0 = symbol_at_zero(family, p, sign)
    if mech == MECH_LONGSHORT:
        return m + z * m1 - m0
    mm = symbol_derivs(family, p, sign, 2.0 * z)[0]
    if mech == MECH_SECOND:
        return m - mm
    if mech == MECH_BF:
        return 2.0 * (m - mm) + (m + z * m1 - m0)
    raise ValueError(f"unknown mechanism code {mech!r}")


def plane_to_model(plane, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if plane == PLANE_RAW:
        return x, y
    if plane == PLANE_CAPILLARY:
        return x, (y / x) ** 2
    if plane == PLANE_VORTICITY:
        return y, x
    raise ValueError(f"unknown plane code {plane!r}")


def mechanism_values(plane, family, sign, mech, x, y):
    z, p = plane_to_model(plane, x, y)
    return mechanism_at(family, sign, mech, z, p)


def bisect_segments(plane, family, sign, mech, x0, y0, x1, y1, tol=1e-12, maxiter=200):
    """Bisect the mechanism function along straight segments in plane coordinates.

    Each segment must bracket a sign change. Iterates until the segment
    parameter interval is below ``tol`` relative to the segment length.
    Returns the midpoint coordinates (x, y).
    """
    x0 = np.asarray(x0, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    dx = np.asarray(x1, dtype=float) - x0
    dy = np.asarray(y1, dtype=float) - y0
    lo = np.zeros_like(x0)
    hi = np.ones_like(x0)
    flo = np.sign(mechanism_values(plane, family, sign, mech, x0, y0))
    for _ in range(maxiter):
        if np.all(hi - lo <= tol):
            break
        mid = 0.5 * (lo + hi)
        fm = np.sign(mechanism_values(plane, family, sign, mech, x0 + mid * dx, y0 + mid * dy))
        same = fm == flo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    mid = 0.5 * (lo + hi)
    return x0 + mid * dx, y0 + mid * dy
