"""Modulational instability of Whitham waves with surface tension or constant vorticity."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .diagrams import (CurveKind, Plane, PointClass, StabilityCurve, capillary_diagram,
                       classify_point, curve_intersections, vorticity_diagram)
from .dispersion import (Branch, DimensionalParams, DispersionModel, Family, group_velocity,
                         group_velocity_deriv, longwave_kdv_coeffs, nondimensionalize, symbol,
                         symbol_at_zero, symbol_deriv)
from .errors import (ConvergenceError, NumericalError, ParameterDomainError, ResonanceError,
                     UnsupportedModelError, WhithamError)
from .floquet import (GrowthCheck, SpectrumResult, bloch_matrix, bloch_spectrum, kernel_basis,
                      mi_growth_check, unmodulated_spectrum)
from .stability import (CriticalPoint, CriticalRoot, IndexReport, Mechanism, Verdict, bf_root,
                        critical_wavenumbers, deep_water_band, delta_bf, delta_mi,
                        mechanism_roots, stability_intervals, vorticity_critical_curve,
                        wilton_condition)
from .waves import (TravelingWave, WaveSource, expansion_wave, galilean_shift, in_sigma,
                    refine_wave, residual, resonant_wavenumbers)

__all__ = [
    "BACKEND", "Branch", "ConvergenceError", "CriticalPoint", "CriticalRoot", "CurveKind",
    "DimensionalParams", "DispersionModel", "Family", "GrowthCheck", "IndexReport", "Mechanism",
    "NumericalError", "ParameterDomainError", "Plane", "PointClass", "ResonanceError",
    "SpectrumResult", "StabilityCurve", "TravelingWave", "UnsupportedModelError", "Verdict",
    "WaveSource", "WhithamError", "bf_root", "bloch_matrix", "bloch_spectrum",
    "capillary_diagram", "classify_point", "critical_wavenumbers", "curve_intersections",
    "deep_water_band", "delta_bf", "delta_mi", "expansion_wave", "galilean_shift",
    "group_velocity", "group_velocity_deriv", "in_sigma", "kernel_basis", "longwave_kdv_coeffs",
    "mechanism_roots", "mi_growth_check", "nondimensionalize", "refine_wave", "residual",
    "resonant_wavenumbers", "stability_intervals", "symbol", "symbol_at_zero", "symbol_deriv",
    "unmodulated_spectrum", "vorticity_critical_curve", "vorticity_diagram", "wilton_condition",
]
