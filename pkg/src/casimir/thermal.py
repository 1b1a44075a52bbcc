"""Finite-temperature Casimir force: Matsubara sum and exponential-series forms.

Both forms share the spectral density S(xi) of :mod:`casimir.lifshitz`:

* Matsubara:  F/A = hbar omega_T / (4 pi^2) * sum'_m S(m omega_T)
* series:     F/A = hbar / (4 pi^2) * sum'_n 2 int_0^inf cos(2 pi n xi / omega_T) S(xi) dxi

where the primed sum halves the zeroth term. The series form only samples
S on xi > 0, so it is insensitive to how the m = 0 TE term is prescribed;
the Matsubara form needs an explicit prescription for it.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .constants import C, HBAR, thermal_frequency
from .errors import ConvergenceError, DomainError
from .lifshitz import DEFAULT_QUAD, integrate_xi, spectral_density
from .quadrature import euler_average, gauss_legendre_unit, power_law_tail


class M0Prescription(str, Enum):
    """How the TE contribution of the zeroth Matsubara frequency is fixed.

    ``half_weight_limit``
        half weight times the xi -> 0+ limit of each polarization (zero for
        Drude TE, finite for plasma TE).
    ``drude_te_zero``
        the TE m = 0 term is set to zero whatever the mirrors are.
    ``plasma_te_limit``
        the TE m = 0 term is taken from the mirrors with every relaxation
        rate set to zero (identical to ``half_weight_limit`` for lossless
        mirrors).
    """

    HALF_WEIGHT_LIMIT = "half_weight_limit"
    DRUDE_TE_ZERO = "drude_te_zero"
    PLASMA_TE_LIMIT = "plasma_te_limit"


@dataclass(frozen=True)
class ThermalConfig:
    temperature: float
    m0_prescription: M0Prescription = M0Prescription.HALF_WEIGHT_LIMIT

    def __post_init__(self):
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise DomainError("thermal computations need a positive temperature; use the T = 0 force instead")
        object.__setattr__(self, "m0_prescription", M0Prescription(self.m0_prescription))

    @property
    def omega_T(self):
        return thermal_frequency(self.temperature)


@dataclass(frozen=True)
class SeriesSpec:
    """Controls for the exponential-series representation.

    ``n_max`` bounds the number of thermal terms; each cosine transform is
    integrated half-period by half-period with ``gl_nodes`` Gauss points and
    the alternating partial sums are Euler-averaged.
    """

    n_max: int = 200
    rel_tol: float = 1e-7
    gl_nodes: int = 12
    min_half_periods: int = 16
    max_half_periods: int = 4096
    cutoff_decay: float = 40.0

    def __post_init__(self):
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")


@dataclass(frozen=True)
class ThermalResult:
    """A thermal force (N) with its error estimate and bookkeeping."""

    value: float
    error: float
    terms: int
    prescription: M0Prescription = None
    m0_te: float = 0.0
    prescription_sensitive: bool = False
    converged: bool = True

    def __float__(self):
        return float(self.value)


def _resolve(cavity, thermal):
    if thermal is None:
        thermal = ThermalConfig(cavity.temperature)
    elif cavity.temperature not in (0.0, thermal.temperature):
        raise DomainError(f"cavity temperature {cavity.temperature} K disagrees with thermal config "
                          f"{thermal.temperature} K")
    return replace(cavity, temperature=0.0), thermal


def _lossless(cavity):
    return replace(cavity, mirror1=cavity.mirror1.lossless_limit(), mirror2=cavity.mirror2.lossless_limit())


def m0_te_density(cavity, prescription, kernel="force", quad=DEFAULT_QUAD):
    """S_TE at the zeroth Matsubara frequency under ``prescription``."""
    prescription = M0Prescription(prescription)
    if prescription is M0Prescription.DRUDE_TE_ZERO:
        return 0.0
    if prescription is M0Prescription.PLASMA_TE_LIMIT:
        cavity = _lossless(cavity)
    values, _ = spectral_density(cavity, np.array([0.0]), kernel, quad)
    return float(values[0, 0])


def _matsubara(cavity, thermal, kernel, quad, cutoff=1e-10, patience=10, chunk=64, max_terms=200000):
    cavity, thermal = _resolve(cavity, thermal)
    omega_T = thermal.omega_T
    prefactor = HBAR * cavity.area * omega_T / (4.0 * math.pi**2)

    s0, e0 = spectral_density(cavity, np.array([0.0]), kernel, quad)
    m0_te = m0_te_density(cavity, thermal.m0_prescription, kernel, quad)
    # contested when the xi -> 0+ TE limit differs from the lossless mirrors' value
    limit = float(s0[0, 0])
    lossless = m0_te_density(cavity, M0Prescription.PLASMA_TE_LIMIT, kernel, quad)
    sensitive = abs(lossless - limit) > 10 * quad.rel_tol * (abs(lossless) + abs(float(s0[1, 0])))

    terms = [0.5 * (m0_te + s0[1, 0])]
    errors = [0.5 * (e0[:, 0].sum())]
    total = terms[0]
    small = 0
    m = 1
    while small < patience:
        if m > max_terms:
            raise ConvergenceError("Matsubara sum did not converge", partial=prefactor * total)
        ms = np.arange(m, m + chunk)
        values, errs = spectral_density(cavity, ms * omega_T, kernel, quad)
        for t, e in zip(values.sum(axis=0), errs.sum(axis=0)):
            terms.append(t)
            errors.append(e)
            total += t
            small = small + 1 if abs(t) < cutoff * abs(total) else 0
            if small >= patience:
                break
        m += chunk

    # geometric bound on the neglected terms
    last, before = terms[-1], terms[-2]
    tail = 0.0
    if before != 0 and 0 < last / before < 1:
        q = last / before
        tail = last * q / (1.0 - q)
    total = math.fsum(terms) + tail
    error = math.fsum(errors) + abs(tail)
    return ThermalResult(prefactor * total, prefactor * error, len(terms), thermal.m0_prescription,
                         prefactor * 0.5 * m0_te, bool(sensitive))


def matsubara_force(cavity, thermal=None, quad=DEFAULT_QUAD):
    """Thermal Casimir force (N) as the primed sum over Matsubara frequencies."""
    return _matsubara(cavity, thermal, "force", quad)


def matsubara_energy(cavity, thermal=None, quad=DEFAULT_QUAD):
    """Thermal Casimir free energy (J), same primed sum over ln(1 - rho).

    Its derivative with respect to L reproduces :func:`matsubara_force`.
    """
    return _matsubara(cavity, thermal, "energy", quad)


def cosine_transform(cavity, x, quad=DEFAULT_QUAD, series=None, kernel="force", scale=None):
    """2 int_0^inf cos(xi x) sum_p S_p(xi) dxi, integrated between zeros of the cosine.

    Returns ``(value, error)``. Partial sums over half-periods are
    Euler-averaged; the number of half-periods is doubled until two
    successive estimates agree or the integrand has decayed.
    """
    series = series or SeriesSpec()
    u, w = gauss_legendre_unit(series.gl_nodes)
    decay_end = series.cutoff_decay * (scale or (C / (2.0 * cavity.L)))
    half = math.pi / x

    def pieces(start, stop):
        # integrals over [z_{j-1}, z_j], with z_{-1} = 0 and z_j = (j + 1/2) pi / x
        j = np.arange(start, stop)
        a = np.where(j == 0, 0.0, (j - 0.5) * half)
        b = (j + 0.5) * half
        nodes = a[:, None] + (b - a)[:, None] * u[None, :]
        values, errs = spectral_density(cavity, nodes.ravel(), kernel, quad)
        f = (values.sum(axis=0) * np.cos(nodes.ravel() * x)).reshape(nodes.shape)
        ferr = errs.sum(axis=0).reshape(nodes.shape)
        return 2.0 * (b - a) * (f @ w), 2.0 * (b - a) * (ferr @ w)

    count = series.min_half_periods
    parts, perrs = pieces(0, count)
    previous = None
    while True:
        partial = np.cumsum(parts)
        if (count - 0.5) * half > decay_end:
            return float(partial[-1]), float(np.sum(perrs))
        estimate, err = euler_average(partial[count // 2:])
        if previous is not None:
            err = max(err, abs(estimate - previous))
            scale_ref = max(np.max(np.abs(partial)), 1e-300)
            if err <= series.rel_tol * scale_ref or 2 * count > series.max_half_periods:
                return estimate, err + float(np.sum(perrs))
        previous = estimate
        more, merr = pieces(count, 2 * count)
        parts = np.concatenate([parts, more])
        perrs = np.concatenate([perrs, merr])
        count *= 2


def series_force(cavity, thermal=None, series=None, quad=DEFAULT_QUAD, n_max=None):
    """Thermal force (N) from the exponential-series representation.

    The n = 0 term is exactly the zero-temperature force; n >= 1 are thermal
    corrections, summed up to ``n_max`` with a power-law tail estimate.
    """
    cavity, thermal = _resolve(cavity, thermal)
    series = series or SeriesSpec()
    n_max = series.n_max if n_max is None else n_max
    omega_T = thermal.omega_T
    prefactor = HBAR * cavity.area / (4.0 * math.pi**2)

    zero = integrate_xi(cavity, "force", quad)
    total = zero.value
    error = zero.error
    terms = []
    tol = series.rel_tol * abs(zero.value)
    converged = n_max == 0
    for n in range(1, n_max + 1):
        value, err = cosine_transform(cavity, 2.0 * math.pi * n / omega_T, quad, series)
        term = prefactor * value
        terms.append(term)
        total += term
        error += prefactor * err
        if abs(term) < tol and n >= 3:
            converged = True
            break
    tail = power_law_tail(terms) if terms else 0.0
    if not converged:
        if tail == 0.0 or abs(tail) > 1e3 * tol:
            raise ConvergenceError(f"thermal series not converged after n_max = {n_max} terms",
                                   partial=total, error=error)
    total += tail
    error += 0.1 * abs(tail) + (abs(terms[-1]) if terms and not converged else 0.0)
    return ThermalResult(total, error, len(terms) + 1)


@dataclass(frozen=True)
class ThermalComparison:
    """Both thermal representations side by side, with the m = 0 TE bookkeeping."""

    matsubara: ThermalResult
    series: ThermalResult
    difference: float
    relative_difference: float
    m0_te_terms: dict = field(default_factory=dict)
    expected_difference: float = 0.0
    prescription_sensitive: bool = False


def thermal_comparison(cavity, thermal=None, series=None, quad=DEFAULT_QUAD):
    """Evaluate both forms and isolate the m = 0 TE term under every prescription.

    The series form corresponds to taking S_TE(0) as its xi -> 0+ limit, so
    ``expected_difference`` is the chosen prescription's m = 0 TE
    contribution minus the limit's. A series that runs out of terms is
    returned as its partial sum with ``converged=False`` rather than raised.
    """
    cavity0, thermal = _resolve(cavity, thermal)
    mats = matsubara_force(cavity0, thermal, quad)
    try:
        ser = series_force(cavity0, thermal, series, quad)
    except ConvergenceError as exc:
        # dissipative TE structure far below omega_T needs more terms than n_max
        n_max = (series or SeriesSpec()).n_max
        ser = ThermalResult(exc.partial, exc.error, n_max + 1, converged=False)
    prefactor = HBAR * cavity0.area * thermal.omega_T / (4.0 * math.pi**2)
    m0 = {p.value: prefactor * 0.5 * m0_te_density(cavity0, p, "force", quad) for p in M0Prescription}
    expected = m0[thermal.m0_prescription.value] - m0[M0Prescription.HALF_WEIGHT_LIMIT.value]
    diff = mats.value - ser.value
    return ThermalComparison(mats, ser, diff, diff / ser.value, m0, expected, mats.prescription_sensitive)
