"""Phase-speed symbols m(z) of the modified Whitham equations.

Everything here is nondimensional: g = d = 1, lengths in units of the
depth d and speeds in units of sqrt(g d). Two families are supported,

* capillary-gravity, ``m(z) = sqrt((1 + tau z^2) tanh(z) / z)``
  (gravity is the special case ``tau = 0``), and
* constant vorticity, ``m(z) = varpi t(z)/2 +/- sqrt(t(z) + varpi^2 t(z)^2/4)``
  with ``t(z) = tanh(z)/z``.

Derivatives are evaluated in closed form. Near the origin ``t`` and its
derivatives come from a Maclaurin series instead (see ``_kernels_py``).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import ParameterDomainError, UnsupportedModelError

#: |tau - 1/3| below this marks the model as degenerate for the index.
DEGENERATE_TAU_TOL = 1e-8


class Family(str, enum.Enum):
    GRAVITY = "gravity"
    CAPILLARY_GRAVITY = "capillary"
    CONSTANT_VORTICITY = "vorticity"


class Branch(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self) -> float:
        return 1.0 if self is Branch.PLUS else -1.0


@dataclass(frozen=True)
class DispersionModel:
    """Symbol family plus its nondimensional parameters.

    Parameters
    ----------
    family : Family
    tau : float
        Surface tension T/(g d^2). Forced to 0 for ``Family.GRAVITY``.
    varpi : float
        Vorticity gamma sqrt(d/g); only read by ``Family.CONSTANT_VORTICITY``.
    branch : Branch
        Sign in front of the square root; forced to ``PLUS`` unless the
        family is constant vorticity.
    """

    family: Family = Family.GRAVITY
    tau: float = 0.0
    varpi: float = 0.0
    branch: Branch = Branch.PLUS

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "branch", Branch(self.branch))
        tau = float(self.tau)
        varpi = float(self.varpi)
        if not (math.isfinite(tau) and math.isfinite(varpi)):
            raise ParameterDomainError("model parameters must be finite")
        if tau < 0:
            raise ParameterDomainError(f"tau must be >= 0, got {tau!r}")
        if family is Family.GRAVITY:
            tau = 0.0
        if family is not Family.CONSTANT_VORTICITY:
            varpi = 0.0
            object.__setattr__(self, "branch", Branch.PLUS)
        else:
            tau = 0.0
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "varpi", varpi)

    @classmethod
    def gravity(cls) -> "DispersionModel":
        return cls(Family.GRAVITY)

    @classmethod
    def capillary(cls, tau: float) -> "DispersionModel":
        return cls(Family.CAPILLARY_GRAVITY, tau=tau)

    @classmethod
    def vorticity(cls, varpi: float, branch: Branch | str = Branch.PLUS) -> "DispersionModel":
        return cls(Family.CONSTANT_VORTICITY, varpi=varpi, branch=Branch(branch))

    @property
    def is_vorticity(self) -> bool:
        return self.family is Family.CONSTANT_VORTICITY

    @property
    def is_degenerate(self) -> bool:
        """True on the tau = 1/3 line where the index is inconclusive."""
        return (self.family is Family.CAPILLARY_GRAVITY
                and abs(self.tau - 1.0 / 3.0) <= DEGENERATE_TAU_TOL)

    # kernel-level encoding
    @property
    def family_code(self) -> int:
        return kernels.FAMILY_VORTICITY if self.is_vorticity else kernels.FAMILY_CAPILLARY

    @property
    def param(self) -> float:
        return self.varpi if self.is_vorticity else self.tau

    @property
    def sign(self) -> float:
        return self.branch.sign

    def with_param(self, value: float) -> "DispersionModel":
        """Same family and branch with tau (or varpi) replaced."""
        if self.is_vorticity:
            return DispersionModel.vorticity(value, self.branch)
        if self.family is Family.GRAVITY and value != 0:
            return DispersionModel.capillary(value)
        return DispersionModel(self.family, tau=value)

    def to_dict(self) -> dict:
        return {"family": self.family.value, "tau": self.tau,
                "varpi": self.varpi, "branch": self.branch.value}

    @classmethod
    def from_dict(cls, d: dict) -> "DispersionModel":
        return cls(Family(d["family"]), tau=d.get("tau", 0.0),
                   varpi=d.get("varpi", 0.0), branch=Branch(d.get("branch", "plus")))


@dataclass(frozen=True)
class DimensionalParams:
    """Raw dimensional inputs: g [m s^-2], d [m], T [N m^-1 per density], gamma [s^-1]."""

    g: float = 9.81
    d: float = 1.0
    T: float = 0.0
    gamma: float = 0.0


def nondimensionalize(p: DimensionalParams, family: Family | str = Family.CAPILLARY_GRAVITY,
                      branch: Branch | str = Branch.PLUS):
    """Rescale dimensional parameters to ``(model, speed_scale, length_scale)``.

    ``tau = T/(g d^2)``, ``varpi = gamma sqrt(d/g)``, speeds scale with
    ``sqrt(g d)`` and lengths with ``d``.
    """
    if not (p.g > 0):
        raise ParameterDomainError(f"g must be positive, got {p.g!r}")
    if not (p.d > 0):
        raise ParameterDomainError(f"d must be positive, got {p.d!r}")
    if p.T < 0:
        raise ParameterDomainError(f"T must be nonnegative, got {p.T!r}")
    family = Family(family)
    tau = p.T / (p.g * p.d * p.d)
    varpi = p.gamma * math.sqrt(p.d / p.g)
    model = DispersionModel(family, tau=tau, varpi=varpi, branch=Branch(branch))
    return model, math.sqrt(p.g * p.d), p.d


def _scalar_or_array(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


def _check_nonneg(z):
    arr = np.asarray(z, dtype=float)
    if np.any(arr < 0):
        raise ParameterDomainError("z must be nonnegative (m is even; pass |z|)")
    return arr


def _derivs(model: DispersionModel, z):
    return kernels.symbol_derivs(model.family_code, model.param, model.sign,
                                 np.asarray(z, dtype=float))


def m_even(model: DispersionModel, z):
    """m evaluated at |z|; the even extension used by Fourier multipliers."""
    return _derivs(model, np.abs(np.asarray(z, dtype=float)))[0]


def symbol_at_zero(model: DispersionModel) -> float:
    return float(kernels.symbol_at_zero(model.family_code, model.param, model.sign))


def symbol(model: DispersionModel, z):
    """m(z) for z >= 0 (scalar or array)."""
    arr = _check_nonneg(z)
    return _scalar_or_array(_derivs(model, arr)[0], z)


def symbol_deriv(model: DispersionModel, z, order: int = 1):
    """m'(z) or m''(z) in closed form."""
    if order not in (1, 2):
        raise ParameterDomainError(f"order must be 1 or 2, got {order!r}")
    arr = _check_nonneg(z)
    return _scalar_or_array(_derivs(model, arr)[order], z)


def group_velocity(model: DispersionModel, z):
    """(z m(z))' = m + z m'."""
    arr = _check_nonneg(z)
    m, m1, _ = _derivs(model, arr)
    return _scalar_or_array(m + arr * m1, z)


def group_velocity_deriv(model: DispersionModel, z):
    """(z m(z))'' = 2 m' + z m''."""
    arr = _check_nonneg(z)
    _, m1, m2 = _derivs(model, arr)
    return _scalar_or_array(2.0 * m1 + arr * m2, z)


def longwave_kdv_coeffs(model: DispersionModel):
    """Long-wave speed and KdV dispersion coefficient ``(m(0), (1/3 - tau)/2)``.

    ``m(z) = c0 (1 - coeff z^2) + O(z^4)``. Not available for constant
    vorticity, whose KdV limit has no closed-form coefficient here.
    """
    if model.is_vorticity:
        raise UnsupportedModelError("KdV coefficients are only defined for the "
                                    "gravity and capillary-gravity families")
    return symbol_at_zero(model), 0.5 * (1.0 / 3.0 - model.tau)
