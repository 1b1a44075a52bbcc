"""Casimir energies and forces between real mirrors on the imaginary frequency axis."""

__version__ = "0.1.0"

from .constants import ideal_energy, ideal_force, plasma_frequency, plasma_wavelength
from .errors import (CasimirError, ConfigError, ConvergenceError, DomainError, OutOfRegimeError,
                     PassivityError, SingularCompositionError, TableError, ValidityWarning)
from .geometry import SphereConfig, energy_correction_ps, energy_ps, force_ps
from .lifshitz import (CavityConfig, QuadratureSpec, casimir_energy_pp, casimir_force_pp,
                       energy_derivatives_pp, eta_F, round_trip, spectral_density)
from .materials import Drude, OpticalDataTable, Plasma, Tabulated, epsilon_iw, kramers_kronig_iw, \
    load_optical_table
from .perturbations import (CorrugationSpec, RoughnessSpectrum, SensitivityRegime, lateral_energy_pfa,
                            lateral_force_ps_pfa, load_roughness_spectrum, roughness_energy_pfa,
                            roughness_sensitivity_ratio)
from .reflection import (Bulk, Mode, Perfect, Polarization, ScatterPair, Slab, Stack, fresnel_bulk,
                         mirror_reflection, slab_reflection, stack_compose)
from .thermal import (M0Prescription, SeriesSpec, ThermalConfig, matsubara_energy, matsubara_force,
                      series_force, thermal_comparison)

__all__ = [
    "ideal_energy",
    "ideal_force",
    "plasma_frequency",
    "plasma_wavelength",
    "CasimirError",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "OutOfRegimeError",
    "PassivityError",
    "SingularCompositionError",
    "TableError",
    "ValidityWarning",
    "SphereConfig",
    "energy_correction_ps",
    "energy_ps",
    "force_ps",
    "CavityConfig",
    "QuadratureSpec",
    "casimir_energy_pp",
    "casimir_force_pp",
    "energy_derivatives_pp",
    "eta_F",
    "round_trip",
    "spectral_density",
    "Drude",
    "OpticalDataTable",
    "Plasma",
    "Tabulated",
    "epsilon_iw",
    "kramers_kronig_iw",
    "load_optical_table",
    "CorrugationSpec",
    "RoughnessSpectrum",
    "SensitivityRegime",
    "lateral_energy_pfa",
    "lateral_force_ps_pfa",
    "load_roughness_spectrum",
    "roughness_energy_pfa",
    "roughness_sensitivity_ratio",
    "Bulk",
    "Mode",
    "Perfect",
    "Polarization",
    "ScatterPair",
    "Slab",
    "Stack",
    "fresnel_bulk",
    "mirror_reflection",
    "slab_reflection",
    "stack_compose",
    "M0Prescription",
    "SeriesSpec",
    "ThermalConfig",
    "matsubara_energy",
    "matsubara_force",
    "series_force",
    "thermal_comparison",
]
