"""Roughness and corrugation corrections at second order, in the PFA limit.

For plate profiles h1, h2 with zero mean the energy shifts by

    roughness:    dE = a^2 E''(L) / 2
    corrugation:  dE = a1 a2 cos(k b) E''(L) / 2   (h_i = a_i cos(k x), mismatch b)

where E'' is the second L-derivative of the plane-plane energy. Beyond the
PFA only the asymptotic sensitivity ratios r_R = a_R k are provided; the
general response functions are deliberately absent.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .constants import C
from .errors import DomainError, OutOfRegimeError, TableValidationError, ValidityWarning
from .geometry import SphereConfig
from .lifshitz import DEFAULT_QUAD, casimir_force_pp, energy_derivatives_pp
from .materials import read_two_column
from .quadrature import IntegralEstimate

# "much smaller than" means a ratio below this; exposed for configuration
SMALL_RATIO = 0.2

A_R_PLASMON = 0.4492
A_R_SATURATED = 14.0 / 15.0
R_R_PERFECT = 1.0 / 3.0

# wavevector band (1/m) over which spectrum callables are integrated
K_BAND = (1e-2, 1e16)


def _warn(message):
    warnings.warn(message, ValidityWarning, stacklevel=3)


def _plasma_wavelength(cavity):
    omega = cavity.characteristic_frequency
    return 2.0 * math.pi * C / omega if math.isfinite(omega) else 0.0


@dataclass(frozen=True, eq=False)
class RoughnessSpectrum:
    """Roughness of both plates combined: a variance, a spectrum callable, or samples.

    Give exactly one of ``variance`` (m^2), ``spectrum`` (callable sigma(k),
    m^4, k in 1/m) or ``samples`` (``(k, sigma)`` arrays). For isotropic
    spectra a^2 = (1 / 2 pi) int_0^inf k sigma(k) dk.
    """

    variance: float = None
    spectrum: object = None
    samples: tuple = None

    def __post_init__(self):
        given = [x is not None for x in (self.variance, self.spectrum, self.samples)]
        if sum(given) != 1:
            raise DomainError("give exactly one of variance, spectrum or samples")
        if self.variance is not None and not (self.variance >= 0 and math.isfinite(self.variance)):
            raise DomainError("roughness variance must be non-negative")
        if self.samples is not None:
            k, sigma = (np.array(x, dtype=float) for x in self.samples)
            if k.ndim != 1 or k.shape != sigma.shape or k.size < 2:
                raise TableValidationError("roughness samples need two equal-length columns of >= 2 rows")
            if k[0] <= 0 or np.any(np.diff(k) <= 0):
                raise TableValidationError("wavevectors must be positive and strictly increasing")
            if np.any(sigma < 0):
                raise TableValidationError("spectrum values must be non-negative",
                                           line=int(np.argmax(sigma < 0)) + 1)
            object.__setattr__(self, "samples", (k, sigma))

    def _moment(self, power):
        if self.samples is not None:
            k, sigma = self.samples
            return integrate.trapezoid(k**power * k * sigma, k) / (2.0 * math.pi)
        # over ln k, which resolves peaks anywhere in the band of physical wavevectors
        value, _ = integrate.quad(lambda t: math.exp((power + 2) * t) * self.spectrum(math.exp(t)),
                                  math.log(K_BAND[0]), math.log(K_BAND[1]), limit=500, epsrel=1e-10,
                                  points=[j * math.log(10.0) for j in range(-1, 16)])
        return value / (2.0 * math.pi)

    @property
    def a2(self):
        """Combined variance a^2 (m^2)."""
        return float(self.variance) if self.variance is not None else float(self._moment(0))

    @property
    def correlation_length(self):
        """Inverse rms width of the spectrum (m); None for a bare variance."""
        if self.variance is not None:
            return None
        a2 = self._moment(0)
        return math.sqrt(a2 / self._moment(2)) if a2 > 0 else None

    def scaled(self, s):
        """Profiles scaled by ``s`` (variance by s^2)."""
        if self.variance is not None:
            return RoughnessSpectrum(variance=self.variance * s * s)
        if self.samples is not None:
            return RoughnessSpectrum(samples=(self.samples[0], self.samples[1] * s * s))
        spectrum = self.spectrum
        return RoughnessSpectrum(spectrum=lambda k: s * s * spectrum(k))


def load_roughness_spectrum(path):
    """Two-column CSV of k (1/m) and sigma(k) (m^4)."""
    return RoughnessSpectrum(samples=read_two_column(path))


def roughness_energy_pfa(cavity, roughness, quad=DEFAULT_QUAD):
    """Second-order roughness correction a^2 E''(L) / 2 (J)."""
    a2 = roughness.a2
    scales = [cavity.L]
    lam = _plasma_wavelength(cavity)
    if lam > 0:
        scales.append(lam)
    ell = roughness.correlation_length
    if ell is not None:
        scales.append(ell)
        if cavity.L / ell > SMALL_RATIO:
            _warn(f"roughness correlation length {ell:.3g} m is not large against L; PFA underestimates")
    if math.sqrt(a2) > SMALL_RATIO * min(scales):
        _warn("roughness amplitude is not small against L, plasma wavelength or correlation length")
    if a2 == 0:
        return IntegralEstimate(0.0, 0.0)
    return energy_derivatives_pp(cavity, quad, order=2).scaled(0.5 * a2)


class Regime(str, Enum):
    PFA = "pfa"
    PLASMON_SHORT = "plasmon_short"
    SATURATED_LONG = "saturated_long"
    PERFECT_INTERMEDIATE = "perfect_intermediate"


@dataclass(frozen=True)
class SensitivityRegime:
    """Asymptotic regime and whether its chain of inequalities holds by the margin 1/SMALL_RATIO."""

    regime: Regime
    validity: bool


def _chains(k, L, lambda_p):
    lp = lambda_p / (2.0 * math.pi)
    kinv = 1.0 / k
    # each chain lists ratios that must all be >> 1
    return {
        Regime.PFA: (kinv / L, kinv / lp),
        Regime.PLASMON_SHORT: (L / kinv, lp / L),
        Regime.SATURATED_LONG: (lp / kinv, L / lp),
        Regime.PERFECT_INTERMEDIATE: (kinv / lambda_p, L / kinv),
    }


def roughness_sensitivity_ratio(k, L, lambda_p, threshold=SMALL_RATIO):
    """Ratio r_R = G_R(k) / G_R(0) from the asymptotic regime the parameters fall into.

    Returns ``(value, SensitivityRegime)``; raises :class:`OutOfRegimeError`
    when no chain of inequalities holds even loosely (the crossovers need the
    full response function, which is not implemented here).
    """
    for name, v in (("k", k), ("L", L), ("lambda_p", lambda_p)):
        if not (v >= 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be non-negative and finite")
    if L <= 0 or lambda_p <= 0:
        raise DomainError("L and lambda_p must be positive")
    if k == 0:
        return 1.0, SensitivityRegime(Regime.PFA, True)

    for regime, ratios in _chains(k, L, lambda_p).items():
        if min(ratios) > 1.0:
            valid = min(ratios) >= 1.0 / threshold
            if not valid:
                _warn(f"{regime.value} regime chain holds only within a factor {min(ratios):.3g}")
            return _ratio(regime, k, L, lambda_p), SensitivityRegime(regime, valid)
    raise OutOfRegimeError(
        f"k = {k:.4g} 1/m, L = {L:.4g} m, lambda_p = {lambda_p:.4g} m lie in no asymptotic regime; "
        "the full roughness response function (external reference) would be needed")


def _ratio(regime, k, L, lambda_p):
    if regime is Regime.PFA:
        return 1.0
    if regime is Regime.PLASMON_SHORT:
        return A_R_PLASMON * L * k
    if regime is Regime.SATURATED_LONG:
        return A_R_SATURATED * (lambda_p / (2.0 * math.pi)) * k
    return R_R_PERFECT * L * k


@dataclass(frozen=True)
class CorrugationSpec:
    """Sinusoidal corrugations a1 cos(k x), a2 cos(k (x - b)) on the two plates."""

    a1: float
    a2: float
    k: float
    b: float = 0.0

    def __post_init__(self):
        if not (self.a1 > 0 and self.a2 > 0):
            raise DomainError("corrugation amplitudes must be positive")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError("corrugation wavevector must be positive")
        if not math.isfinite(self.b):
            raise DomainError("mismatch b must be finite")

    @property
    def wavelength(self):
        return 2.0 * math.pi / self.k

    def shifted(self, b):
        return CorrugationSpec(self.a1, self.a2, self.k, b)


def _check_corrugation(cavity, corr):
    if corr.k * cavity.L > SMALL_RATIO:
        _warn(f"kL = {corr.k * cavity.L:.3g}: beyond the PFA sector, where the exact response "
              "falls below its PFA value")
    scale = min(cavity.L, corr.wavelength, _plasma_wavelength(cavity) or math.inf)
    if max(corr.a1, corr.a2) > SMALL_RATIO * scale:
        _warn("corrugation amplitude is not small against L, plasma wavelength or period")


def lateral_energy_pfa(cavity, corr, quad=DEFAULT_QUAD):
    """Corrugation energy a1 a2 cos(k b) E''(L) / 2 (J) for plane plates."""
    _check_corrugation(cavity, corr)
    curvature = energy_derivatives_pp(cavity, quad, order=2)
    return curvature.scaled(0.5 * corr.a1 * corr.a2 * math.cos(corr.k * corr.b))


def lateral_force_ps_pfa(corr, sphere, cavity, quad=DEFAULT_QUAD):
    """PFA lateral force pi a1 a2 k R sin(k b) F_PP / A (N) on a corrugated sphere.

    Equal to the b-derivative of the plane-sphere corrugation energy.
    """
    if not isinstance(sphere, SphereConfig):
        raise DomainError("sphere must be a SphereConfig")
    if not math.isclose(cavity.L, sphere.L, rel_tol=1e-12):
        raise DomainError(f"cavity L = {cavity.L} m differs from sphere L = {sphere.L} m")
    sphere.check()
    if sphere.R * sphere.L < corr.wavelength**2 / SMALL_RATIO:
        _warn("R L is not large against the corrugation period squared; curvature and corrugation interplay")
    _check_corrugation(cavity, corr)
    force = casimir_force_pp(cavity, quad)
    factor = math.pi * corr.a1 * corr.a2 * corr.k * sphere.R * math.sin(corr.k * corr.b) / cavity.area
    return force.scaled(factor)
