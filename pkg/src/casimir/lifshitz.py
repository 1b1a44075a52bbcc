"""Plane-plane Casimir energy and force on the imaginary frequency axis.

Per unit area, for kernel g(rho, kappa),

    Q/A = hbar / (4 pi^2) * int_0^inf dxi S(xi),
    S(xi) = sum_p int_{xi/c}^inf kappa g dkappa,

with g = ln(1 - rho) for the energy, 2 kappa rho / (1 - rho) for the force
(attraction positive, F = dE/dL) and -4 kappa^2 rho / (1 - rho)^2 for the
second derivative of the energy; ``integrated_energy`` gives
int_L^inf E dL' through the dilogarithm. rho = r1 r2 exp(-2 kappa L).

The kappa integral uses a Gauss-Legendre rule on a rational map of
[xi/c, inf), doubled per node until converged; the xi integral is globally
adaptive Gauss-Kronrod on a rational map of [0, inf).
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import special

from .constants import C, HBAR, ideal_force
from .errors import ConvergenceError, DomainError, PassivityError
from .quadrature import IntegralEstimate, adaptive_gauss_kronrod, gauss_legendre_unit
from .reflection import Perfect, Polarization


@dataclass(frozen=True)
class CavityConfig:
    """Two mirrors a distance ``L`` (m) apart, plate area ``area`` (m^2), temperature in K."""

    mirror1: object
    mirror2: object
    L: float
    area: float = 1.0
    temperature: float = 0.0

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError("separation L must be positive and finite")
        if not (self.area > 0 and math.isfinite(self.area)):
            raise DomainError("area must be positive and finite")
        if not (self.temperature >= 0 and math.isfinite(self.temperature)):
            raise DomainError("temperature must be non-negative")

    def at(self, L):
        return replace(self, L=L)

    @property
    def is_perfect(self):
        return isinstance(self.mirror1, Perfect) and isinstance(self.mirror2, Perfect)

    @property
    def characteristic_frequency(self):
        return min(self.mirror1.characteristic_frequency, self.mirror2.characteristic_frequency)


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and node budgets for the (xi, kappa) double integral.

    ``xi_scale`` (rad/s) and ``kappa_scale`` (1/m) set the rational maps;
    ``None`` picks min(c / 2L, mirror plasma frequency) and 1 / 2L.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_subdivisions: int = 200
    inner_nodes: int = 32
    max_inner_nodes: int = 1024
    xi_scale: float = None
    kappa_scale: float = None

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.inner_nodes < 2 or self.max_inner_nodes < self.inner_nodes:
            raise DomainError("inconsistent inner node budget")


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class RoundTrip:
    """Open-loop function rho of one cavity round trip."""

    rho: float

    @property
    def closed_loop(self):
        return self.rho / (1.0 - self.rho)


def round_trip(cavity, mode):
    """rho = r1 r2 exp(-2 kappa L) for a single mode."""
    r1 = cavity.mirror1.amplitudes(np.array(mode.xi), np.array(mode.kappa))
    r2 = cavity.mirror2.amplitudes(np.array(mode.xi), np.array(mode.kappa))
    index = 0 if mode.polarization is Polarization.TE else 1
    rho = float(r1[index] * r2[index]) * math.exp(-2.0 * mode.kappa * cavity.L)
    if abs(rho) >= 1.0:
        raise PassivityError(f"|rho| = {abs(rho):.6g} >= 1 for {mode}")
    return RoundTrip(rho)


# ---------------------------------------------------------------------------
# kernels g(rho, kappa)


def _energy_kernel(rho, kappa):
    return np.log1p(-rho)


def _force_kernel(rho, kappa):
    return 2.0 * kappa * rho / (1.0 - rho)


def _curvature_kernel(rho, kappa):
    return -4.0 * kappa**2 * rho / (1.0 - rho) ** 2


def _integrated_energy_kernel(rho, kappa):
    # int_L^inf ln(1 - rho(L')) dL' = -Li2(rho) / (2 kappa)
    return -special.spence(1.0 - rho) / (2.0 * kappa)


KERNELS = {
    "energy": _energy_kernel,
    "force": _force_kernel,
    "curvature": _curvature_kernel,
    "integrated_energy": _integrated_energy_kernel,
}


def _inner_once(cavity, xi, kernel, n, kappa_scale):
    u, w = gauss_legendre_unit(n)
    q = kappa_scale * u / (1.0 - u)
    dq = kappa_scale * w / (1.0 - u) ** 2
    kappa = xi[:, None] / C + q[None, :]
    xi2 = np.broadcast_to(xi[:, None], kappa.shape)
    r1 = cavity.mirror1.amplitudes(xi2, kappa)
    r2 = cavity.mirror2.amplitudes(xi2, kappa)
    decay = np.exp(-2.0 * kappa * cavity.L)
    out = np.empty((2, xi.size))
    for p in range(2):
        rho = r1[p] * r2[p] * decay
        if np.any(np.abs(rho) >= 1.0):
            raise PassivityError("round-trip amplitude |rho| >= 1; mirror model is not passive")
        out[p] = (kappa * kernel(rho, kappa)) @ dq
    return out


def spectral_density(cavity, xi, kernel="force", quad=DEFAULT_QUAD):
    """Per-polarization S_p(xi) = int_{xi/c}^inf kappa g dkappa, with node errors.

    Returns ``(values, errors)``, each of shape (2, len(xi)) with TE first.
    The Gauss-Legendre order is doubled per node until successive orders
    agree to ``quad.rel_tol / 10``.
    """
    g = KERNELS[kernel] if isinstance(kernel, str) else kernel
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi < 0):
        raise DomainError("xi must be non-negative")
    kappa_scale = quad.kappa_scale or 1.0 / (2.0 * cavity.L)
    tol = 0.1 * quad.rel_tol

    n = quad.inner_nodes
    coarse = _inner_once(cavity, xi, g, n, kappa_scale)
    values = np.empty_like(coarse)
    errors = np.empty_like(coarse)
    todo = np.arange(xi.size)
    while True:
        fine = _inner_once(cavity, xi[todo], g, 2 * n, kappa_scale)
        diff = np.abs(fine - coarse)
        values[:, todo] = fine
        errors[:, todo] = diff
        bad = np.any(diff > tol * np.abs(fine), axis=0)
        if not np.any(bad) or 4 * n > quad.max_inner_nodes:
            break
        todo = todo[bad]
        coarse = fine[:, bad]
        n *= 2
    return values, errors


def _xi_scale(cavity, quad):
    if quad.xi_scale:
        return quad.xi_scale
    return min(C / (2.0 * cavity.L), cavity.characteristic_frequency)


def integrate_xi(cavity, kernel, quad=DEFAULT_QUAD, polarization_weights=(1.0, 1.0)):
    """hbar A / (4 pi^2) * int_0^inf dxi sum_p w_p S_p(xi), as an IntegralEstimate."""
    scale = _xi_scale(cavity, quad)
    weights = np.asarray(polarization_weights, dtype=float)

    def integrand(v):
        xi = scale * v / (1.0 - v)
        jac = scale / (1.0 - v) ** 2
        values, errors = spectral_density(cavity, xi, kernel, quad)
        return jac * (weights @ values), jac * (np.abs(weights) @ errors)

    prefactor = HBAR * cavity.area / (4.0 * math.pi**2)
    abs_tol = quad.abs_tol / prefactor if quad.abs_tol else 0.0
    try:
        result = adaptive_gauss_kronrod(integrand, 0.0, 1.0, rel_tol=quad.rel_tol, abs_tol=abs_tol,
                                        max_subdivisions=quad.max_subdivisions)
    except ConvergenceError as exc:
        raise ConvergenceError(str(exc), partial=None if exc.partial is None else exc.partial * prefactor,
                               error=None if exc.error is None else exc.error * prefactor) from None
    return result.scaled(prefactor)


def _zero_temperature(cavity):
    if cavity.temperature != 0:
        raise DomainError("plane-plane integrals here are zero-temperature; use the thermal module for T > 0")


def casimir_energy_pp(cavity, quad=DEFAULT_QUAD):
    """Casimir energy E (J, negative = binding) between the two plates at T = 0."""
    _zero_temperature(cavity)
    return integrate_xi(cavity, "energy", quad)


def casimir_force_pp(cavity, quad=DEFAULT_QUAD):
    """Casimir force F = dE/dL (N, positive = attraction) at T = 0."""
    _zero_temperature(cavity)
    return integrate_xi(cavity, "force", quad)


def energy_derivatives_pp(cavity, quad=DEFAULT_QUAD, order=1):
    """dE/dL (order 1, J/m) or d^2E/dL^2 (order 2, J/m^2) from the differentiated integrand."""
    _zero_temperature(cavity)
    if order == 1:
        return integrate_xi(cavity, "force", quad)
    if order == 2:
        return integrate_xi(cavity, "curvature", quad)
    raise DomainError("order must be 1 or 2")


def eta_F(cavity, quad=DEFAULT_QUAD):
    """Force reduction factor F / F_perfect at the same L and area."""
    if cavity.is_perfect:
        return IntegralEstimate(1.0, 0.0)
    force = casimir_force_pp(cavity, quad)
    return force.scaled(1.0 / ideal_force(cavity.L, cavity.area))
