import math

import numpy as np
import pytest
from scipy import integrate

from casimir.constants import C, HBAR, ideal_energy, ideal_force
from casimir.errors import DomainError, PassivityError
from casimir.lifshitz import (CavityConfig, QuadratureSpec, casimir_energy_pp, casimir_force_pp,
                              energy_derivatives_pp, eta_F, round_trip, spectral_density)
from casimir.materials import Drude, Plasma
from casimir.reflection import Bulk, Mirror, Mode, Perfect, Slab

from conftest import GOLD_LAMBDA_P, GOLD_OMEGA_P

TIGHT = QuadratureSpec(rel_tol=1e-11)


def _oracle_force(model, L):
    """Force per area from scipy dblquad in x = 2 kappa L, y = 2 xi L / c, textbook Fresnel."""

    def integrand(x, y):
        xi = y * C / (2 * L)
        kappa = x / (2 * L)
        eps = model.epsilon(np.array([xi]))[0] if y > 0 else np.inf
        km = math.sqrt(kappa**2 + (eps - 1.0) * xi**2 / C**2)
        r_te = (kappa - km) / (kappa + km)
        r_tm = (km - eps * kappa) / (km + eps * kappa)
        total = 0.0
        for r in (r_te, r_tm):
            rho = r * r * math.exp(-x)
            total += x * x * rho / (1.0 - rho)
        return total

    value, _ = integrate.dblquad(integrand, 0.0, 80.0, lambda y: y, lambda y: y + 80.0,
                                 epsabs=0.0, epsrel=1e-12)
    return HBAR * C / (32 * math.pi**2 * L**4) * value


@pytest.mark.parametrize("model, L", [
    (Plasma(GOLD_OMEGA_P), GOLD_LAMBDA_P),
    (Drude(GOLD_OMEGA_P, 4e-3 * GOLD_OMEGA_P), 0.3 * GOLD_LAMBDA_P),
])
def test_force_matches_independent_double_integral(model, L):
    mirror = Bulk(model)
    got = casimir_force_pp(CavityConfig(mirror, mirror, L), TIGHT).value
    assert got == pytest.approx(_oracle_force(model, L), rel=1e-8, abs=0)


@pytest.mark.parametrize("L", [1e-7, 1e-6, 1e-5])
def test_perfect_mirror_closed_forms(L):
    cavity = CavityConfig(Perfect(), Perfect(), L, area=2e-4)
    assert casimir_energy_pp(cavity).value == pytest.approx(ideal_energy(L, 2e-4), rel=1e-9, abs=0)
    assert casimir_force_pp(cavity).value == pytest.approx(ideal_force(L, 2e-4), rel=1e-9, abs=0)
    curvature = energy_derivatives_pp(cavity, order=2).value
    assert curvature == pytest.approx(12 * ideal_energy(L, 2e-4) / L**2, rel=1e-9, abs=0)


def test_derivatives_match_finite_differences(drude_mirror):
    L = 0.8 * GOLD_LAMBDA_P
    h = 1e-4 * L
    cav = CavityConfig(drude_mirror, drude_mirror, L)
    energy = [casimir_energy_pp(cav.at(L + s * h), TIGHT).value for s in (-1, 1)]
    force = [casimir_force_pp(cav.at(L + s * h), TIGHT).value for s in (-1, 1)]
    assert (energy[1] - energy[0]) / (2 * h) == pytest.approx(casimir_force_pp(cav, TIGHT).value, rel=1e-6, abs=0)
    assert (force[1] - force[0]) / (2 * h) == pytest.approx(
        energy_derivatives_pp(cav, TIGHT, order=2).value, rel=1e-6, abs=0)
    assert energy_derivatives_pp(cav, TIGHT, order=1).value == casimir_force_pp(cav, TIGHT).value
    with pytest.raises(DomainError):
        energy_derivatives_pp(cav, order=3)


def test_extensive_in_area(plasma_mirror):
    one = casimir_force_pp(CavityConfig(plasma_mirror, plasma_mirror, 1e-7, area=1.0)).value
    three = casimir_force_pp(CavityConfig(plasma_mirror, plasma_mirror, 1e-7, area=3.0)).value
    assert three == pytest.approx(3 * one, rel=1e-14, abs=0)


def test_signs_and_ordering(plasma_mirror, drude_mirror):
    L = 2e-7
    perfect = casimir_force_pp(CavityConfig(Perfect(), Perfect(), L)).value
    plasma = casimir_force_pp(CavityConfig(plasma_mirror, plasma_mirror, L)).value
    drude = casimir_force_pp(CavityConfig(drude_mirror, drude_mirror, L)).value
    energy = casimir_energy_pp(CavityConfig(plasma_mirror, plasma_mirror, L)).value
    assert perfect > plasma > drude > 0
    assert energy < 0


def test_force_decreases_and_reduction_grows_with_distance(plasma_mirror):
    Ls = np.geomspace(0.05, 20, 8) * GOLD_LAMBDA_P
    forces = [casimir_force_pp(CavityConfig(plasma_mirror, plasma_mirror, L)).value for L in Ls]
    etas = [eta_F(CavityConfig(plasma_mirror, plasma_mirror, L)).value for L in Ls]
    assert np.all(np.diff(forces) < 0)
    assert np.all(np.diff(etas) > 0)
    assert all(0 < e < 1 for e in etas)


def test_tighter_tolerance_is_consistent(drude_mirror):
    cav = CavityConfig(drude_mirror, drude_mirror, 0.5 * GOLD_LAMBDA_P)
    coarse = casimir_force_pp(cav, QuadratureSpec(rel_tol=1e-5))
    fine = casimir_force_pp(cav, QuadratureSpec(rel_tol=1e-10))
    assert fine.error < coarse.error
    assert abs(coarse.value - fine.value) <= coarse.error + fine.error
    assert abs(coarse.value - fine.value) <= 1e-5 * fine.value


def test_thick_slab_mirrors_behave_as_bulk(plasma_mirror):
    slab = Slab(Plasma(GOLD_OMEGA_P), 10 * GOLD_LAMBDA_P)
    L = GOLD_LAMBDA_P
    bulk = casimir_force_pp(CavityConfig(plasma_mirror, plasma_mirror, L)).value
    thick = casimir_force_pp(CavityConfig(slab, slab, L)).value
    assert thick == pytest.approx(bulk, rel=1e-6, abs=0)


def test_spectral_density_static_point(drude_mirror, plasma_mirror):
    values, _ = spectral_density(CavityConfig(drude_mirror, drude_mirror, 1e-6), [0.0, 1e12])
    assert values[0, 0] == 0.0  # Drude TE vanishes at xi = 0
    assert values[1, 0] > 0
    values, _ = spectral_density(CavityConfig(plasma_mirror, plasma_mirror, 1e-6), [0.0])
    assert values[0, 0] > 0


class _Gain(Mirror):
    def amplitudes(self, xi, kappa):
        shape = np.broadcast(np.asarray(xi), np.asarray(kappa)).shape
        return np.full(shape, 1.5), np.full(shape, 1.5)


def test_active_mirror_rejected():
    cav = CavityConfig(_Gain(), _Gain(), 1e-9)
    with pytest.raises(PassivityError):
        casimir_force_pp(cav)
    with pytest.raises(PassivityError):
        round_trip(cav, Mode(1e10, 1.0))


def test_round_trip_value():
    cav = CavityConfig(Perfect(), Perfect(), 1e-6)
    mode = Mode(1e14, 1e6)
    assert round_trip(cav, mode).rho == pytest.approx(math.exp(-2 * mode.kappa * 1e-6), rel=1e-14, abs=0)


def test_configuration_validation(plasma_mirror):
    with pytest.raises(DomainError):
        CavityConfig(plasma_mirror, plasma_mirror, 0.0)
    with pytest.raises(DomainError):
        CavityConfig(plasma_mirror, plasma_mirror, 1e-6, area=-1.0)
    with pytest.raises(DomainError):
        casimir_force_pp(CavityConfig(plasma_mirror, plasma_mirror, 1e-6, temperature=300.0))
    assert eta_F(CavityConfig(Perfect(), Perfect(), 1e-6)).value == 1.0
