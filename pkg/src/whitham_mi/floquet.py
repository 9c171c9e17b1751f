"""Hill's method for the Bloch-reduced linearization about a periodic wave.

Perturbations ``v = e^{i xi z} phi(z)`` of a wave ``(w, c)`` obey
``lambda phi = L_xi phi`` with ``L_xi = e^{-i xi z} d_z(-M_k + c - 2w) e^{i xi z}``.
Truncating ``phi`` to Fourier modes ``-N..N`` gives a dense matrix whose
eigenvalues approximate the spectrum. This module deliberately does not use
the index formula; it is the independent check on it.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._backend import max_workers
from .dispersion import DispersionModel, m_even, symbol
from .errors import NumericalError, ParameterDomainError
from .stability import Verdict, critical_wavenumbers, delta_mi
from .waves import TravelingWave, _require_sigma, expansion_wave, refine_wave

#: harmonics smaller than this (relative to the largest) are treated as absent
NEGLIGIBLE_HARMONIC = 1e-15
DEFAULT_SIDEBANDS = (0.1, 0.25, 0.5, 1.0, 2.5)


@dataclass
class SpectrumResult:
    xi: float
    N_F: int
    eigenvalues: np.ndarray
    max_real_near_origin: float
    r_origin: float
    eigenvectors_stored: bool = False
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"xi": self.xi, "N_F": self.N_F,
                "eigenvalues": [[float(v.real), float(v.imag)] for v in self.eigenvalues],
                "max_real_near_origin": _finite_or_none(self.max_real_near_origin),
                "r_origin": self.r_origin, "eigenvectors_stored": False}

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumResult":
        ev = np.array([complex(re, im) for re, im in d["eigenvalues"]])
        mr = d["max_real_near_origin"]
        return cls(xi=d["xi"], N_F=d["N_F"], eigenvalues=ev,
                   max_real_near_origin=math.nan if mr is None else mr,
                   r_origin=d["r_origin"], eigenvectors_stored=False)


def _finite_or_none(v):
    return float(v) if np.isfinite(v) else None


def _highest_harmonic(wave: TravelingWave) -> int:
    h = np.abs(wave.cosine_coeffs)
    if not h.any():
        return 0
    significant = np.nonzero(h > NEGLIGIBLE_HARMONIC * h.max())[0]
    return int(significant[-1])


def bloch_matrix(model: DispersionModel, wave: TravelingWave, xi: float, N_F: int) -> np.ndarray:
    """Matrix of L_xi on modes -N_F..N_F.

    Entry (m, n) is ``i(m+xi) [(c - m(k(m+xi))) delta_mn - 2 w_{m-n}]``.
    """
    need = _highest_harmonic(wave) + 2
    if N_F < need:
        raise ParameterDomainError(f"N_F={N_F} too small for the wave's harmonics (need >= {need})")
    idx = np.arange(-N_F, N_F + 1)
    q = idx + xi
    w = wave.full_coeffs(2 * N_F)
    conv = w[2 * N_F + idx[:, None] - idx[None, :]]
    A = -2.0 * conv.astype(complex)
    A[np.diag_indices_from(A)] += wave.c - m_even(model, wave.k * q)
    return 1j * q[:, None] * A


def unmodulated_spectrum(model: DispersionModel, k: float, xi: float, N_F: int) -> np.ndarray:
    """Closed-form spectrum ``i (n+xi)(m(k) - m(k(n+xi)))`` of the zero wave."""
    q = np.arange(-N_F, N_F + 1) + xi
    return 1j * q * (symbol(model, k) - m_even(model, k * q))


def _default_r_origin(wave):
    return 10.0 * abs(wave.a) if wave.a != 0 else 0.1


def bloch_spectrum(model: DispersionModel, wave: TravelingWave, xi: float, N_F: int = 32,
                   r_origin: float | None = None, store_vectors: bool = False) -> SpectrumResult:
    """Dense eigensolve of the truncated L_xi."""
    if r_origin is None:
        r_origin = _default_r_origin(wave)
    A = bloch_matrix(model, wave, xi, N_F)
    try:
        if store_vectors:
            ev, vecs = scipy.linalg.eig(A)
        else:
            ev, vecs = scipy.linalg.eigvals(A), None
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigensolver failed at xi={xi}: {exc}") from exc
    near = ev[np.abs(ev) <= r_origin]
    max_re = float(near.real.max()) if len(near) else math.nan
    return SpectrumResult(xi=float(xi), N_F=N_F, eigenvalues=ev, max_real_near_origin=max_re,
                          r_origin=float(r_origin), eigenvectors_stored=store_vectors,
                          eigenvectors=vecs)


def kernel_basis(model: DispersionModel, k: float, a: float, N_F: int = 4):
    """Generalized kernel of L_0 to first order in a, as two-sided coefficient vectors.

    phi1 = cos z + (-1/2 + a cos 2z)/D, phi2 = sin z + a sin 2z / D, phi3 = 1,
    with D = m(k) - m(2k).
    """
    if N_F < 2:
        raise ParameterDomainError("N_F must be at least 2")
    _require_sigma(model, k)
    D = symbol(model, k) - symbol(model, 2 * k)
    c = N_F
    phi1 = np.zeros(2 * N_F + 1, dtype=complex)
    phi2 = np.zeros_like(phi1)
    phi3 = np.zeros_like(phi1)
    phi1[c] = -0.5 / D
    phi1[c + 1] = phi1[c - 1] = 0.5
    phi1[c + 2] = phi1[c - 2] = a / (2 * D)
    phi2[c + 1], phi2[c - 1] = -0.5j, 0.5j
    phi2[c + 2], phi2[c - 2] = -0.5j * a / D, 0.5j * a / D
    phi3[c] = 1.0
    return phi1, phi2, phi3


@dataclass
class GrowthCheck:
    """Index prediction against the Hill's-method observation near the origin."""

    predicted: Verdict
    observed: Verdict
    agree: bool
    indeterminate: bool
    max_real: float
    unstable_threshold: float
    stable_threshold: float
    xi_list: tuple
    per_xi: tuple

    def to_dict(self) -> dict:
        return {"predicted": self.predicted.value, "observed": self.observed.value,
                "agree": self.agree, "indeterminate": self.indeterminate,
                "max_real": self.max_real, "unstable_threshold": self.unstable_threshold,
                "stable_threshold": self.stable_threshold, "xi_list": list(self.xi_list),
                "per_xi": list(self.per_xi)}

    @classmethod
    def from_dict(cls, d: dict) -> "GrowthCheck":
        return cls(predicted=Verdict(d["predicted"]), observed=Verdict(d["observed"]),
                   agree=d["agree"], indeterminate=d["indeterminate"], max_real=d["max_real"],
                   unstable_threshold=d["unstable_threshold"],
                   stable_threshold=d["stable_threshold"], xi_list=tuple(d["xi_list"]),
                   per_xi=tuple(d["per_xi"]))


def sideband_xis(a: float, multiples=DEFAULT_SIDEBANDS):
    """Bloch parameters proportional to the amplitude, where modulational growth lives."""
    return tuple(abs(a) * s for s in multiples)


def spectra_over_xi(model, wave, xi_list, N_F, r_origin=None):
    xi_list = list(xi_list)
    workers = min(max_workers(), len(xi_list)) or 1
    if workers == 1:
        return [bloch_spectrum(model, wave, xi, N_F, r_origin) for xi in xi_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda xi: bloch_spectrum(model, wave, xi, N_F, r_origin), xi_list))


def mi_growth_check(model: DispersionModel, k: float, a: float, xi_list=None, N_F: int = 32,
                    g_thresh: float = 1e-2, delta_margin: float = 0.05,
                    wave: TravelingWave | None = None) -> GrowthCheck:
    """Compare the sign of the index with the largest growth rate near the origin.

    Unstable is observed when some ``xi`` gives a real part above
    ``g_thresh a^2``, stable when all stay below ``1e-2 g_thresh a^2``;
    anything in between is flagged indeterminate.
    """
    if not 0 < a <= 0.02:
        raise ParameterDomainError(f"a must be in (0, 0.02], got {a!r}")
    near = critical_wavenumbers(model, max(k - delta_margin, 1e-6), k + delta_margin, n_grid=200)
    if near:
        raise ParameterDomainError(
            f"k={k} is within {delta_margin} of a stability boundary at z={near[0].z:.6g}")
    if xi_list is None:
        xi_list = sideband_xis(a)
    xi_list = tuple(float(x) for x in xi_list)
    predicted = delta_mi(model, k).verdict
    if wave is None:
        wave = refine_wave(model, expansion_wave(model, k, a), N_F=N_F)
    spectra = spectra_over_xi(model, wave, xi_list, N_F)
    per_xi = tuple(s.max_real_near_origin for s in spectra)
    max_real = float(np.nanmax(per_xi))
    hi = g_thresh * a * a
    lo = 1e-2 * hi
    if max_real > hi:
        observed, indeterminate = Verdict.UNSTABLE, False
    elif max_real < lo:
        observed, indeterminate = Verdict.STABLE, False
    else:
        observed, indeterminate = Verdict.BOUNDARY, True
    agree = (not indeterminate) and observed is predicted
    return GrowthCheck(predicted=predicted, observed=observed, agree=agree,
                       indeterminate=indeterminate, max_real=max_real, unstable_threshold=hi,
                       stable_threshold=lo, xi_list=xi_list, per_xi=per_xi)
