"""Benjamin-Feir and modulational-instability indices.

For the carrier wave number z = kd the index is::

    Delta_MI = (z m)'' ((z m)' - m(0)) / (m(z) - m(2z)) * Delta_BF
    Delta_BF = 2 (m(z) - m(2z)) + (z m)' - m(0)

Small-amplitude waves are modulationally unstable where Delta_MI < 0 and
stable where it is positive. Each factor vanishing is a mechanism for a
change of stability.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .dispersion import (Branch, DispersionModel, Family, group_velocity,
                         group_velocity_deriv, m_even, symbol_at_zero)
from .errors import ParameterDomainError, UnsupportedModelError

TOL_BOUNDARY = 1e-10
EPS_RESONANCE = 1e-10
ROOT_TOL = 1e-10


class Verdict(str, enum.Enum):
    STABLE = "S"
    UNSTABLE = "U"
    BOUNDARY = "boundary"
    DEGENERATE = "degenerate"


class Mechanism(enum.IntEnum):
    """Ways the index can change sign; values are the kernel codes."""

    GROUP_VELOCITY_EXTREMUM = 1
    LONG_SHORT_RESONANCE = 2
    SECOND_HARMONIC = 3
    BENJAMIN_FEIR = 4

    @property
    def label(self) -> str:
        return _MECH_LABELS[self]


_MECH_LABELS = {
    Mechanism.GROUP_VELOCITY_EXTREMUM: "group_velocity_extremum",
    Mechanism.LONG_SHORT_RESONANCE: "long_short_resonance",
    Mechanism.SECOND_HARMONIC: "second_harmonic",
    Mechanism.BENJAMIN_FEIR: "bf",
}
_MECH_BY_LABEL = {v: k for k, v in _MECH_LABELS.items()}


def mechanism_from_label(label: str) -> Mechanism:
    return _MECH_BY_LABEL[label]


@dataclass(frozen=True)
class IndexReport:
    """Index value, its three dispersive factors and the stability verdict at z."""

    z: float
    delta_bf: float
    delta_mi: float
    factor_group_curvature: float
    factor_longshort: float
    factor_second_harmonic: float
    verdict: Verdict
    mechanisms: tuple = field(default=())

    def to_dict(self) -> dict:
        return {"z": self.z, "delta_bf": self.delta_bf, "delta_mi": self.delta_mi,
                "factor_group_curvature": self.factor_group_curvature,
                "factor_longshort": self.factor_longshort,
                "factor_second_harmonic": self.factor_second_harmonic,
                "verdict": self.verdict.value,
                "mechanisms": [m.label for m in self.mechanisms]}

    @classmethod
    def from_dict(cls, d: dict) -> "IndexReport":
        return cls(z=d["z"], delta_bf=_num(d["delta_bf"]), delta_mi=_num(d["delta_mi"]),
                   factor_group_curvature=d["factor_group_curvature"],
                   factor_longshort=d["factor_longshort"],
                   factor_second_harmonic=d["factor_second_harmonic"],
                   verdict=Verdict(d["verdict"]),
                   mechanisms=tuple(mechanism_from_label(s) for s in d.get("mechanisms", ())))


def _num(v):
    return math.nan if v is None else float(v)


@dataclass(frozen=True)
class CriticalRoot:
    z: float
    mechanism: Mechanism


def _positive(z):
    arr = np.asarray(z, dtype=float)
    if np.any(arr <= 0):
        raise ParameterDomainError("z must be positive")
    return arr


def _factors(model, z):
    m = m_even(model, z)
    m2 = m_even(model, 2.0 * z)
    gv = group_velocity(model, z)
    curv = group_velocity_deriv(model, z)
    m0 = symbol_at_zero(model)
    return curv, gv - m0, m - m2


def delta_bf(model: DispersionModel, z):
    """2 (m(z) - m(2z)) + (z m(z))' - m(0)."""
    arr = _positive(z)
    _, longshort, second = _factors(model, arr)
    out = 2.0 * second + longshort
    return float(out) if np.ndim(z) == 0 else out


def delta_mi_value(model: DispersionModel, z):
    """Vectorized index; NaN where the second-harmonic factor is ~0."""
    arr = _positive(z)
    curv, longshort, second = _factors(model, arr)
    bf = 2.0 * second + longshort
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(np.abs(second) < EPS_RESONANCE, np.nan, curv * longshort / second * bf)
    return float(out) if np.ndim(z) == 0 else out


def verdict_from_value(value: float, tol: float = TOL_BOUNDARY) -> Verdict:
    if not np.isfinite(value) or abs(value) <= tol:
        return Verdict.BOUNDARY
    return Verdict.UNSTABLE if value < 0 else Verdict.STABLE


def delta_mi(model: DispersionModel, z: float, tol: float = TOL_BOUNDARY) -> IndexReport:
    """Full index report at a single wave number z."""
    z = float(_positive(z))
    curv, longshort, second = (float(v) for v in _factors(model, z))
    bf = 2.0 * second + longshort
    near = [mech for mech, val in ((Mechanism.GROUP_VELOCITY_EXTREMUM, curv),
                                   (Mechanism.LONG_SHORT_RESONANCE, longshort),
                                   (Mechanism.SECOND_HARMONIC, second),
                                   (Mechanism.BENJAMIN_FEIR, bf)) if abs(val) <= tol]
    if abs(second) < EPS_RESONANCE:
        value = math.nan
        verdict = Verdict.BOUNDARY
    else:
        value = curv * longshort / second * bf
        verdict = verdict_from_value(value, tol)
    if model.is_degenerate:
        verdict = Verdict.DEGENERATE
    return IndexReport(z=z, delta_bf=bf, delta_mi=value, factor_group_curvature=curv,
                       factor_longshort=longshort, factor_second_harmonic=second,
                       verdict=verdict, mechanisms=tuple(near))


def mechanism_function(model: DispersionModel, mechanism: Mechanism, z):
    """Evaluate one mechanism function (kernel path) at z."""
    arr = np.asarray(z, dtype=float)
    return kernels.mechanism_values(kernels.PLANE_RAW, model.family_code, model.sign,
                                    int(mechanism), arr, np.full_like(arr, model.param))


def _sign_change_brackets(values):
    s = np.sign(values)
    return np.nonzero(s[:-1] * s[1:] < 0)[0], np.nonzero(s == 0)[0]


def _grid(lo, hi, n, spacing):
    if spacing == "log":
        return np.geomspace(lo, hi, n)
    if spacing == "linear":
        return np.linspace(lo, hi, n)
    raise ParameterDomainError(f"spacing must be 'linear' or 'log', got {spacing!r}")


def mechanism_roots(model: DispersionModel, mechanism: Mechanism, z_lo: float, z_hi: float,
                    n_grid: int = 2000, spacing: str = "linear", tol: float = ROOT_TOL):
    """Sign-scan one mechanism function on a grid and bisect every bracket."""
    z = _grid(z_lo, z_hi, n_grid, spacing)
    vals = mechanism_function(model, mechanism, z)
    idx, zeros = _sign_change_brackets(vals)
    roots = list(z[zeros])
    if len(idx):
        width = float(np.max(z[idx + 1] - z[idx]))
        rx, _ = kernels.bisect_segments(kernels.PLANE_RAW, model.family_code, model.sign,
                                        int(mechanism), z[idx], np.full(len(idx), model.param),
                                        z[idx + 1], np.full(len(idx), model.param),
                                        tol=max(1e-15, min(1e-3, 0.1 * tol / width)))
        roots.extend(rx)
    return sorted(float(r) for r in roots)


def critical_wavenumbers(model: DispersionModel, z_lo: float = 0.05, z_hi: float = 20.0,
                         n_grid: int = 2000, spacing: str = "linear"):
    """All roots of the four mechanism functions in (z_lo, z_hi), sorted by z."""
    if not 0 < z_lo < z_hi:
        raise ParameterDomainError("need 0 < z_lo < z_hi")
    if n_grid < 100:
        raise ParameterDomainError("n_grid must be at least 100")
    out = []
    for mech in Mechanism:
        out.extend(CriticalRoot(r, mech) for r in mechanism_roots(model, mech, z_lo, z_hi,
                                                                   n_grid, spacing))
    return sorted(out, key=lambda r: r.z)


def stability_intervals(model: DispersionModel, z_lo: float = 0.05, z_hi: float = 20.0,
                        n_grid: int = 2000):
    """Split (z_lo, z_hi) at mechanism roots and classify each piece.

    Returns a list of ``(left, right, verdict)``.
    """
    roots = [r.z for r in critical_wavenumbers(model, z_lo, z_hi, n_grid)]
    edges = [z_lo] + roots + [z_hi]
    out = []
    for left, right in zip(edges[:-1], edges[1:]):
        if right - left <= 0:
            continue
        v = delta_mi(model, 0.5 * (left + right)).verdict
        if out and out[-1][2] is v:
            out[-1] = (out[-1][0], right, v)
        else:
            out.append((left, right, v))
    return out


def wilton_condition(model: DispersionModel, z):
    """tau z^2 - tanh^2 z / (3 - tanh^2 z); zero exactly where m(z) = m(2z)."""
    if model.family not in (Family.GRAVITY, Family.CAPILLARY_GRAVITY):
        raise UnsupportedModelError("the Wilton condition is for capillary-gravity symbols")
    arr = _positive(z)
    th2 = np.tanh(arr) ** 2
    out = model.tau * arr * arr - th2 / (3.0 - th2)
    return float(out) if np.ndim(z) == 0 else out


@dataclass(frozen=True)
class CriticalPoint:
    """Critical wave number z_c of one vorticity value; ``bounded`` is False
    when no sign change was found below the search cap."""

    varpi: float
    z_c: float
    bounded: bool = True


def bf_root(model: DispersionModel, z_max: float = 200.0, z_cap: float = 1e6,
            z_min: float = 1e-3, n_grid: int = 4000):
    """First sign change of Delta_BF on (z_min, z_max), extending z_max up to z_cap."""
    hi = z_max
    while True:
        roots = mechanism_roots(model, Mechanism.BENJAMIN_FEIR, z_min, hi, n_grid, "log")
        if roots:
            return roots[0]
        if hi >= z_cap:
            return math.inf
        hi = min(4.0 * hi, z_cap)


def vorticity_critical_curve(branch: Branch | str, varpi_samples, z_max: float = 200.0,
                             z_cap: float = 1e6):
    """z_c(varpi): the sign change of Delta_BF for each sampled vorticity."""
    samples = list(varpi_samples)
    if not samples:
        raise ParameterDomainError("varpi_samples must be nonempty")
    branch = Branch(branch)
    out = []
    for w in samples:
        zc = bf_root(DispersionModel.vorticity(w, branch), z_max, z_cap)
        out.append(CriticalPoint(float(w), zc, math.isfinite(zc)))
    return out


def deep_water_band(z: float = 50.0, s_range=(0.01, 2.0), n_grid: int = 4000):
    """Stable interval in s = tau z^2 at a fixed large z.

    Returns ``(lower, upper)``. The limiting deep-water symbol is not
    smooth, so a finite z stands in for it.
    """
    s_lo, s_hi = s_range
    if not 0 < s_lo < s_hi:
        raise ParameterDomainError("need 0 < s_lo < s_hi")
    s = np.linspace(s_lo, s_hi, n_grid)
    taus = s / z ** 2
    zz = np.full_like(s, z)
    code = kernels.FAMILY_CAPILLARY
    edges = [s_lo, s_hi]
    for mech in Mechanism:
        vals = kernels.mechanism_values(kernels.PLANE_RAW, code, 1.0, int(mech), zz, taus)
        idx, zeros = _sign_change_brackets(vals)
        edges.extend(s[zeros])
        if len(idx):
            _, rt = kernels.bisect_segments(kernels.PLANE_RAW, code, 1.0, int(mech),
                                            zz[idx], taus[idx], zz[idx], taus[idx + 1], tol=1e-12)
            edges.extend(rt * z ** 2)
    edges = sorted(set(float(e) for e in edges))
    stable = []
    for left, right in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (left + right)
        if delta_mi(DispersionModel.capillary(mid / z ** 2), z).verdict is Verdict.STABLE:
            if stable and stable[-1][1] == left:
                stable[-1] = (stable[-1][0], right)
            else:
                stable.append((left, right))
    if not stable:
        return math.nan, math.nan
    return max(stable, key=lambda iv: iv[1] - iv[0])
