import math

import numpy as np
import pytest

from casimir.constants import ideal_energy, ideal_force
from casimir.errors import DomainError, OutOfRegimeError, TableValidationError, ValidityWarning
from casimir.geometry import SphereConfig, energy_correction_ps
from casimir.lifshitz import CavityConfig, QuadratureSpec, energy_derivatives_pp
from casimir.perturbations import (A_R_PLASMON, A_R_SATURATED, CorrugationSpec, Regime, RoughnessSpectrum,
                                   lateral_energy_pfa, lateral_force_ps_pfa, load_roughness_spectrum,
                                   roughness_energy_pfa, roughness_sensitivity_ratio)
from casimir.reflection import Perfect

from conftest import GOLD_LAMBDA_P

pytestmark = pytest.mark.filterwarnings("ignore::casimir.errors.ValidityWarning")

L = 1e-6


def test_zero_roughness():
    cav = CavityConfig(Perfect(), Perfect(), L)
    assert roughness_energy_pfa(cav, RoughnessSpectrum(variance=0.0)).value == 0.0


def test_perfect_mirror_relative_correction():
    a = 5e-9
    cav = CavityConfig(Perfect(), Perfect(), L)
    rel = roughness_energy_pfa(cav, RoughnessSpectrum(variance=a * a)).value / ideal_energy(L)
    assert rel == pytest.approx(6 * a * a / L**2, rel=1e-9, abs=0)


def test_quadratic_in_amplitude(plasma_mirror):
    cav = CavityConfig(plasma_mirror, plasma_mirror, 3e-7)
    base = RoughnessSpectrum(samples=(np.geomspace(1e4, 1e6, 50), np.full(50, 1e-30)))
    ref = roughness_energy_pfa(cav, base).value
    for s in (0.5, 2.0):
        assert roughness_energy_pfa(cav, base.scaled(s)).value == pytest.approx(s * s * ref, rel=1e-12, abs=0)


def test_spectrum_variance_and_correlation_length():
    ell = 50e-9
    gauss = lambda k: 2 * math.pi * ell**2 * 4e-18 * np.exp(-(k * ell) ** 2 / 2)  # noqa: E731
    spec = RoughnessSpectrum(spectrum=gauss)
    assert spec.a2 == pytest.approx(4e-18, rel=1e-8, abs=0)
    assert spec.correlation_length == pytest.approx(ell / math.sqrt(2), rel=1e-6, abs=0)
    k = np.linspace(1e3, 2e8, 20001)
    sampled = RoughnessSpectrum(samples=(k, gauss(k)))
    assert sampled.a2 == pytest.approx(4e-18, rel=1e-3, abs=0)


def test_spectrum_csv(tmp_path):
    path = tmp_path / "rough.csv"
    path.write_text("# k (1/m), sigma (m^4)\n1e5, 1e-30\n1e6, 1e-31\n")
    assert load_roughness_spectrum(path).a2 > 0
    with pytest.raises(TableValidationError):
        RoughnessSpectrum(samples=([1e6, 1e5], [1.0, 1.0]))
    with pytest.raises(DomainError):
        RoughnessSpectrum(variance=1.0, spectrum=lambda k: k)


def test_large_roughness_warns():
    cav = CavityConfig(Perfect(), Perfect(), L)
    with pytest.warns(ValidityWarning):
        roughness_energy_pfa(cav, RoughnessSpectrum(variance=(0.5 * L) ** 2))


def test_pfa_limit():
    value, regime = roughness_sensitivity_ratio(0.0, L, GOLD_LAMBDA_P)
    assert value == 1.0 and regime.regime is Regime.PFA and regime.validity
    value, regime = roughness_sensitivity_ratio(1e3, L, GOLD_LAMBDA_P)
    assert value == 1.0 and regime.regime is Regime.PFA


def test_example_regimes():
    lp = 137e-9
    value, regime = roughness_sensitivity_ratio(1e8, 2e-6, lp)
    assert regime.regime is Regime.SATURATED_LONG
    assert value == A_R_SATURATED * (lp / (2 * math.pi)) * 1e8
    value, regime = roughness_sensitivity_ratio(2e6, 2e-6, lp)
    assert regime.regime is Regime.PERFECT_INTERMEDIATE
    assert value == 2e-6 * 2e6 / 3


def test_gap_between_regimes_raises():
    lp = 137e-9
    with pytest.raises(OutOfRegimeError):
        roughness_sensitivity_ratio(2 * math.pi / (2 * lp), 2e-6, lp)  # 1/k between lp/2pi and lp


def test_ratio_exceeds_one_where_pfa_underestimates(rng):
    for _ in range(200):
        lp = 10 ** rng.uniform(-8, -6)
        L_ = 10 ** rng.uniform(-9, -5)
        k = 10 ** rng.uniform(4, 11)
        try:
            value, regime = roughness_sensitivity_ratio(k, L_, lp)
        except OutOfRegimeError:
            continue
        if regime.validity and regime.regime in (Regime.PLASMON_SHORT, Regime.SATURATED_LONG):
            assert value >= 1.0


def test_plasmon_coefficient():
    lp = 10e-6
    value, regime = roughness_sensitivity_ratio(1e9, 1e-7, lp)
    assert regime.regime is Regime.PLASMON_SHORT and regime.validity
    assert value == A_R_PLASMON * 1e-7 * 1e9


def test_corrugation_energy(perfect_mirror):
    cav = CavityConfig(perfect_mirror, perfect_mirror, L)
    corr = CorrugationSpec(10e-9, 5e-9, 2 * math.pi / 20e-6)
    assert lateral_energy_pfa(cav, corr).value == pytest.approx(
        10e-9 * 5e-9 * 6 * ideal_energy(L) / L**2, rel=1e-9, abs=0)
    quarter = corr.shifted(corr.wavelength / 4)
    assert abs(lateral_energy_pfa(cav, quarter).value) < 1e-15 * abs(lateral_energy_pfa(cav, corr).value)


def test_corrugation_symmetries(plasma_mirror):
    cav = CavityConfig(plasma_mirror, plasma_mirror, 2e-7)
    a = lateral_energy_pfa(cav, CorrugationSpec(8e-9, 3e-9, 1e6, 1e-7)).value
    b = lateral_energy_pfa(cav, CorrugationSpec(3e-9, 8e-9, 1e6, -1e-7)).value
    assert a == pytest.approx(b, rel=1e-14, abs=0)


def test_corrugation_validation():
    with pytest.raises(DomainError):
        CorrugationSpec(0.0, 1e-9, 1e6)
    with pytest.raises(DomainError):
        CorrugationSpec(1e-9, 1e-9, 0.0)


def test_lateral_force_shape(plasma_mirror):
    Lc = 2e-7
    cav = CavityConfig(plasma_mirror, plasma_mirror, Lc)
    sphere = SphereConfig(100e-6, Lc)
    corr = CorrugationSpec(59e-9, 8e-9, 0.0052e9)
    assert lateral_force_ps_pfa(corr, sphere, cav).value == 0.0
    peak = lateral_force_ps_pfa(corr.shifted(math.pi / 2 / corr.k), sphere, cav).value
    shifted = lateral_force_ps_pfa(corr.shifted(math.pi / 2 / corr.k + corr.wavelength), sphere, cav).value
    assert peak > 0
    assert shifted == pytest.approx(peak, rel=1e-9, abs=0)
    bigger = lateral_force_ps_pfa(corr.shifted(math.pi / 2 / corr.k), SphereConfig(200e-6, Lc), cav).value
    assert bigger == pytest.approx(2 * peak, rel=1e-14, abs=0)


def test_lateral_force_perfect_closed_form():
    cav = CavityConfig(Perfect(), Perfect(), L)
    corr = CorrugationSpec(20e-9, 10e-9, 2 * math.pi / 5e-6, 1e-6)
    sphere = SphereConfig(1e-3, L)
    expected = math.pi * 20e-9 * 10e-9 * corr.k * 1e-3 * math.sin(corr.k * 1e-6) * ideal_force(L)
    assert lateral_force_ps_pfa(corr, sphere, cav).value == pytest.approx(expected, rel=1e-9, abs=0)


def test_lateral_force_is_b_derivative_of_sphere_energy(plasma_mirror):
    Lc = 2e-7
    quad = QuadratureSpec(rel_tol=1e-11)
    cav = CavityConfig(plasma_mirror, plasma_mirror, Lc)
    sphere = SphereConfig(100e-6, Lc)
    corr = CorrugationSpec(59e-9, 8e-9, 0.0052e9, 0.3 / 0.0052e9)

    def sphere_energy(b):
        spec = corr.shifted(b)
        per_area = lambda x: np.array([lateral_energy_pfa(cav.at(v), spec, quad).value  # noqa: E731
                                       for v in np.atleast_1d(x)])
        return energy_correction_ps(per_area, sphere, rel_tol=1e-10).value

    h = 1e-3 / corr.k
    derivative = (sphere_energy(corr.b + h) - sphere_energy(corr.b - h)) / (2 * h)
    assert derivative == pytest.approx(lateral_force_ps_pfa(corr, sphere, cav, quad).value, rel=1e-6, abs=0)


def test_lateral_warnings(plasma_mirror):
    cav = CavityConfig(plasma_mirror, plasma_mirror, 2e-7)
    with pytest.warns(ValidityWarning, match="kL"):
        lateral_energy_pfa(cav, CorrugationSpec(5e-9, 5e-9, 0.0052e9))
    with pytest.warns(ValidityWarning, match="R L"):
        lateral_force_ps_pfa(CorrugationSpec(5e-9, 5e-9, 2 * math.pi / 10e-6), SphereConfig(100e-6, 2e-7), cav)


def test_curvature_taken_from_core(plasma_mirror):
    cav = CavityConfig(plasma_mirror, plasma_mirror, 3e-7)
    a2 = 1e-18
    assert roughness_energy_pfa(cav, RoughnessSpectrum(variance=a2)).value == pytest.approx(
        0.5 * a2 * energy_derivatives_pp(cav, order=2).value, rel=1e-15, abs=0)
