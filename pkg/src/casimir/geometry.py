"""Plane-sphere configuration in the proximity force approximation (PFA).

A sphere of radius R at closest distance L is treated as a superposition of
plane-plane patches:

    E_PS(L) = (2 pi R / A) int_L^inf E_PP(L') dL',   F_PS = dE_PS/dL = 2 pi R |E_PP(L)| / A.

Forces follow the plane-plane convention (attraction positive, F = dE/dL).
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, ValidityWarning
from .lifshitz import DEFAULT_QUAD, casimir_energy_pp, integrate_xi
from .quadrature import IntegralEstimate, adaptive_gauss_kronrod

PFA_RATIO_LIMIT = 0.01


@dataclass(frozen=True)
class SphereConfig:
    """Sphere radius ``R`` and distance of closest approach ``L`` (both m)."""

    R: float
    L: float

    def __post_init__(self):
        if not (self.R > 0 and math.isfinite(self.R)):
            raise DomainError("sphere radius must be positive")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError("closest distance must be positive")
        if self.L >= self.R:
            raise DomainError(f"L/R = {self.L / self.R:.3g} >= 1: the proximity approximation is meaningless")

    @property
    def pfa_valid(self):
        return self.L / self.R < PFA_RATIO_LIMIT

    def check(self):
        if not self.pfa_valid:
            warnings.warn(f"L/R = {self.L / self.R:.3g} exceeds {PFA_RATIO_LIMIT}; PFA may be inaccurate",
                          ValidityWarning, stacklevel=3)


def _match(cavity, sphere):
    if not math.isclose(cavity.L, sphere.L, rel_tol=1e-12):
        raise DomainError(f"cavity L = {cavity.L} m differs from sphere L = {sphere.L} m")
    sphere.check()


def _plane_energy(cavity, quad):
    if cavity.temperature > 0:
        from .thermal import matsubara_energy

        result = matsubara_energy(cavity, quad=quad)
        return IntegralEstimate(result.value, result.error)
    return casimir_energy_pp(cavity, quad)


def force_ps(cavity, sphere, quad=DEFAULT_QUAD):
    """PFA plane-sphere force 2 pi R |E_PP| / A in N (positive = attraction).

    At T > 0 the plane-plane free energy is used in place of the energy.
    """
    _match(cavity, sphere)
    energy = _plane_energy(cavity, quad)
    return IntegralEstimate(2.0 * math.pi * sphere.R * abs(energy.value) / cavity.area,
                            2.0 * math.pi * sphere.R * energy.error / cavity.area, energy.evaluations)


def energy_ps(cavity, sphere, quad=DEFAULT_QUAD):
    """PFA plane-sphere energy (J) at T = 0, integrating E_PP over L' in closed form.

    The L' integral of ln(1 - rho) is a dilogarithm, so this costs one
    Lifshitz integral; its L-derivative reproduces :func:`force_ps`.
    """
    _match(cavity, sphere)
    if cavity.temperature != 0:
        raise DomainError("energy_ps is zero-temperature only")
    result = integrate_xi(cavity, "integrated_energy", quad)
    return result.scaled(2.0 * math.pi * sphere.R / cavity.area)


def _call(func, x):
    try:
        out = np.asarray(func(x), dtype=float)
        if out.shape == x.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(func(v)) for v in x])


def energy_correction_ps(delta_E_pp_per_area, sphere, rel_tol=1e-10, max_subdivisions=400):
    """(2 pi R) int_L^inf dE(L') dL' for a plane-plane correction per unit area (J/m^2).

    The integral is mapped onto u in (0, 1] with L' = L / u. Vectorised
    callables are used as such; scalar ones are looped over.
    """
    L = sphere.L

    def integrand(u):
        return _call(delta_E_pp_per_area, L / u) * L / u**2

    try:
        result = adaptive_gauss_kronrod(integrand, 0.0, 1.0, rel_tol=rel_tol, abs_tol=1e-300,
                                        max_subdivisions=max_subdivisions)
    except ConvergenceError as exc:
        raise ConvergenceError("plane-sphere integral did not converge; the correction must decay at large L",
                               partial=exc.partial, error=exc.error) from None
    if not math.isfinite(result.value):
        raise ConvergenceError("plane-sphere integral diverges; the correction must decay at large L")
    return result.scaled(2.0 * math.pi * sphere.R)
