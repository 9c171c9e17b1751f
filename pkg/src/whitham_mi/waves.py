"""Small-amplitude 2pi-periodic traveling waves.

A wave solves ``M_k w - c w + w^2 = (m(0) - c)^2 b`` where ``M_k`` acts on
``e^{inz}`` as multiplication by ``m(kn)``. Profiles are even and stored as
the half spectrum ``w(z) = w_0 + sum_{n>=1} 2 w_n cos(nz)``.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import bisect

from .dispersion import DispersionModel, Family, m_even, symbol, symbol_at_zero
from .errors import ConvergenceError, NumericalError, ParameterDomainError, ResonanceError

SIGMA_GUARD = 1e-6
SIGMA_NMAX = 64
DEFAULT_MODES = 32
MAX_NEWTON = 50


class WaveSource(str, enum.Enum):
    EXPANSION = "expansion"
    REFINED = "refined"


@dataclass(frozen=True)
class TravelingWave:
    """Even periodic wave ``w`` with speed ``c``.

    ``cosine_coeffs[n]`` is the two-sided Fourier coefficient of ``e^{inz}``
    (equal to that of ``e^{-inz}``). ``m0`` is the long-wave speed of the
    model the wave was built for; the Galilean shift needs it.
    """

    k: float
    a: float
    b: float
    cosine_coeffs: np.ndarray
    c: float
    m0: float = 1.0
    source: WaveSource = WaveSource.EXPANSION
    iterations: int = 0

    def __post_init__(self):
        coeffs = np.array(self.cosine_coeffs, dtype=float)
        coeffs.setflags(write=False)
        object.__setattr__(self, "cosine_coeffs", coeffs)
        object.__setattr__(self, "source", WaveSource(self.source))

    @property
    def n_modes(self) -> int:
        return len(self.cosine_coeffs) - 1

    @property
    def quadrature_constant(self) -> float:
        """Right-hand side ``(m(0) - c)^2 b``."""
        return (self.m0 - self.c) ** 2 * self.b

    def full_coeffs(self, N: int | None = None) -> np.ndarray:
        """Two-sided coefficients for modes ``-N..N`` (zero-padded or cut)."""
        if N is None:
            N = self.n_modes
        out = np.zeros(2 * N + 1)
        n = min(N, self.n_modes)
        h = self.cosine_coeffs[: n + 1]
        out[N: N + n + 1] = h
        out[N - n: N + 1] = h[::-1]
        return out

    def profile(self, z):
        z = np.asarray(z, dtype=float)
        n = np.arange(1, self.n_modes + 1)
        return self.cosine_coeffs[0] + 2.0 * np.cos(np.multiply.outer(z, n)) @ self.cosine_coeffs[1:]

    def to_dict(self) -> dict:
        return {"k": self.k, "a": self.a, "b": self.b,
                "cosine_coeffs": [float(v) for v in self.cosine_coeffs],
                "c": self.c, "m0": self.m0, "source": self.source.value,
                "iterations": self.iterations}

    @classmethod
    def from_dict(cls, d: dict) -> "TravelingWave":
        return cls(k=d["k"], a=d["a"], b=d["b"], cosine_coeffs=np.array(d["cosine_coeffs"]),
                   c=d["c"], m0=d.get("m0", 1.0), source=WaveSource(d["source"]),
                   iterations=d.get("iterations", 0))


def _has_resonances(model: DispersionModel) -> bool:
    return model.family is Family.CAPILLARY_GRAVITY and 0.0 < model.tau < 1.0 / 3.0


@functools.lru_cache(maxsize=256)
def _resonances(model: DispersionModel, N_max: int) -> tuple:
    out = []
    for N in range(2, N_max + 1):
        f = lambda k, N=N: symbol(model, k) - symbol(model, N * k)  # noqa: E731
        grid = np.geomspace(1e-4 / N, 200.0, 2000)
        vals = symbol(model, grid) - symbol(model, N * grid)
        idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
        if len(idx) == 0:
            raise NumericalError(
                f"no sign change of m(k) - m({N}k) on [{grid[0]:.3g}, {grid[-1]:.3g}] "
                f"(min {vals.min():.3g}, max {vals.max():.3g})")
        i = idx[0]
        out.append((N, bisect(f, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15, maxiter=200)))
    return tuple(out)


def resonant_wavenumbers(model: DispersionModel, N_max: int = SIGMA_NMAX):
    """The wave numbers k_N with m(k_N) = m(N k_N), N = 2..N_max.

    Only weak surface tension (0 < tau < 1/3) has any; for every other
    model the list is empty.
    """
    if N_max < 2:
        raise ParameterDomainError("N_max must be at least 2")
    if not _has_resonances(model):
        return []
    return list(_resonances(model, int(N_max)))


def in_sigma(model: DispersionModel, k: float, guard: float = SIGMA_GUARD,
             N_max: int = SIGMA_NMAX):
    """Whether k is a non-resonant wave number, and its distance to the nearest k_N."""
    if not k > 0:
        raise ParameterDomainError(f"k must be positive, got {k!r}")
    res = resonant_wavenumbers(model, N_max) if _has_resonances(model) else []
    if not res:
        return True, math.inf
    dist = min(abs(k - kN) for _, kN in res)
    return dist > guard, dist


def _nearest_resonance(model, k, N_max=SIGMA_NMAX):
    return min(resonant_wavenumbers(model, N_max), key=lambda r: abs(k - r[1]))


def _require_sigma(model, k, guard=SIGMA_GUARD):
    ok, dist = in_sigma(model, k, guard)
    if not ok:
        N, kN = _nearest_resonance(model, k)
        raise ResonanceError(f"k={k!r} is within {dist:.3g} of the resonance k_{N}={kN!r}",
                             N=N, k_N=kN)
    mk = symbol(model, k)
    if abs(mk - symbol_at_zero(model)) < 1e-12:
        raise ResonanceError(f"m(k) = m(0) at k={k!r}; mean-mode resonance", N=0, k_N=k)


def expansion_wave(model: DispersionModel, k: float, a: float, b: float = 0.0) -> TravelingWave:
    """Small-amplitude asymptotic wave, accurate to O(a(a^2 + b^2))."""
    _require_sigma(model, k)
    m0 = symbol_at_zero(model)
    mk, m2k = symbol(model, k), symbol(model, 2 * k)
    delta = m0 - mk
    # both truncate the same series: a constant state at speed m(k) + 2 w0 is exact
    w0 = delta * (b - 3 * b * b)
    c0 = mk + 2 * delta * (b - 3 * b * b)
    coeffs = np.array([
        w0 + a * a / (2 * (mk - m0)),
        a / 2,
        a * a / (4 * (mk - m2k)),
    ])
    c = c0 + a * a * (1 / (mk - m0) + 0.5 / (mk - m2k))
    return TravelingWave(k=float(k), a=float(a), b=float(b), cosine_coeffs=coeffs, c=float(c),
                         m0=m0, source=WaveSource.EXPANSION)


def galilean_shift(wave: TravelingWave, v: float) -> TravelingWave:
    """Apply ``w -> w + v``, ``c -> c + 2v``, ``B -> B + (m0 - c) v - v^2``.

    The quadrature residual is unchanged; ``b`` is recomputed from the new
    constant ``B``.
    """
    if v == 0:
        return wave
    coeffs = np.array(wave.cosine_coeffs)
    coeffs[0] += v
    c_new = wave.c + 2 * v
    B_new = wave.quadrature_constant + (wave.m0 - wave.c) * v - v * v
    denom = (wave.m0 - c_new) ** 2
    if denom == 0:
        if B_new != 0:
            raise ParameterDomainError("shifted speed equals m(0); b is undefined")
        b_new = 0.0
    else:
        b_new = B_new / denom
    return replace(wave, cosine_coeffs=coeffs, c=c_new, b=b_new)


def _collocation(n_modes):
    M = max(4 * n_modes, 64)
    return 2 * np.pi * np.arange(M) / M


def residual(model: DispersionModel, wave: TravelingWave) -> float:
    """Max-norm residual of the quadrature equation on a 4N-point grid."""
    N = wave.n_modes
    z = _collocation(N)
    n = np.arange(N + 1)
    h = wave.cosine_coeffs
    mult = m_even(model, wave.k * n)
    weights = np.where(n == 0, 1.0, 2.0)
    basis = np.cos(np.outer(z, n))
    w = basis @ (weights * h)
    Mw = basis @ (weights * mult * h)
    r = Mw - wave.c * w + w * w - wave.quadrature_constant
    return float(np.max(np.abs(r)))


def _square_coeffs(h):
    """Half-spectrum of w^2, modes 0..N, from the half-spectrum of w."""
    N = len(h) - 1
    full = np.concatenate([h[:0:-1], h])
    sq = np.convolve(full, full)
    return sq[2 * N: 3 * N + 1]


def refine_wave(model: DispersionModel, seed: TravelingWave, N_F: int = DEFAULT_MODES,
                tol: float = 1e-14, max_iter: int = MAX_NEWTON) -> TravelingWave:
    """Newton-Galerkin solution of the quadrature equation with b = 0.

    The first harmonic is held at ``a/2``; the remaining coefficients
    ``w_0, w_2..w_N`` and the speed ``c`` are unknowns, one Galerkin
    equation per cosine mode 0..N. Iteration stops once the Galerkin
    equations hold to ``tol``; ``residual`` then measures the truncation
    error of the N-mode representation.
    """
    if N_F < 8:
        raise ParameterDomainError(f"N_F must be at least 8, got {N_F}")
    if seed.b != 0:
        raise ParameterDomainError("refinement requires b = 0; use galilean_shift afterwards")
    k, a = seed.k, seed.a
    _require_sigma(model, k)
    m0 = symbol_at_zero(model)
    if a == 0:
        return TravelingWave(k=k, a=0.0, b=0.0, cosine_coeffs=np.zeros(N_F + 1),
                             c=symbol(model, k), m0=m0, source=WaveSource.REFINED)

    n = np.arange(N_F + 1)
    mult = m_even(model, k * n)
    h = np.zeros(N_F + 1)
    m_seed = min(seed.n_modes, N_F)
    h[: m_seed + 1] = seed.cosine_coeffs[: m_seed + 1]
    h[1] = a / 2
    c = seed.c
    free = np.array([0] + list(range(2, N_F + 1)))

    def galerkin(h, c):
        return (mult - c) * h + _square_coeffs(h)

    res = float(np.max(np.abs(galerkin(h, c))))
    it = 0
    while res > tol:
        if it >= max_iter:
            raise ConvergenceError(f"Newton did not converge in {max_iter} steps (residual {res:.3g})")
        full = np.zeros(4 * N_F + 1)
        full[2 * N_F: 3 * N_F + 1] = h
        full[N_F: 2 * N_F + 1] = h[::-1]
        # d(w^2)_n / d h_j = 2 (h_{n-j} + h_{n+j}) for j >= 1, 2 h_n for j = 0
        J = 2.0 * (full[2 * N_F + n[:, None] - n[None, :]] + full[2 * N_F + n[:, None] + n[None, :]])
        J[:, 0] = 2.0 * h
        J[n, n] += mult - c
        A = np.column_stack([J[:, free], -h])
        step = np.linalg.solve(A, galerkin(h, c))
        h = h.copy()
        h[free] -= step[:-1]
        c -= step[-1]
        it += 1
        new_res = float(np.max(np.abs(galerkin(h, c))))
        if not np.isfinite(new_res) or (new_res > 10 * res and new_res > tol):
            raise ConvergenceError(f"Newton residual grew from {res:.3g} to {new_res:.3g}")
        res = new_res
    wave = TravelingWave(k=k, a=a, b=0.0, cosine_coeffs=h, c=c, m0=m0,
                         source=WaveSource.REFINED, iterations=it)
    return wave
