import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir.constants import C
from casimir.errors import DomainError, SingularCompositionError
from casimir.materials import Drude, Plasma
from casimir.reflection import (Bulk, Mode, Perfect, Polarization, ScatterPair, Slab, Stack, fresnel_bulk,
                                mirror_reflection, slab_reflection, stack_compose)

from conftest import GOLD_LAMBDA_P, GOLD_OMEGA_P


def _textbook(eps, xi, kappa):
    """Fresnel amplitudes written directly from the medium wave number."""
    km = np.sqrt(kappa**2 + (eps - 1.0) * xi**2 / C**2)
    return (kappa - km) / (kappa + km), (km - eps * kappa) / (km + eps * kappa)


def _modes(n, rng):
    xi = np.exp(rng.uniform(np.log(1e-3), np.log(1e2), n)) * GOLD_OMEGA_P
    kappa = xi / C * (1.0 + np.exp(rng.uniform(-5, 5, n)))
    return xi, kappa


def test_perfect_mirror(rng):
    xi, kappa = _modes(5, rng)
    r_te, r_tm = Perfect().amplitudes(xi, kappa)
    assert np.all(r_te == -1.0) and np.all(r_tm == -1.0)


def test_bulk_matches_textbook_form(rng):
    model = Drude(GOLD_OMEGA_P, 0.01 * GOLD_OMEGA_P)
    xi, kappa = _modes(200, rng)
    r_te, r_tm = Bulk(model).amplitudes(xi, kappa)
    te, tm = _textbook(model.epsilon(xi), xi, kappa)
    np.testing.assert_allclose(r_te, te, rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(r_tm, tm, rtol=1e-10, atol=1e-14)


def test_normal_incidence_polarizations_coincide():
    model = Plasma(GOLD_OMEGA_P)
    xi = np.geomspace(1e-2, 1e2, 9) * GOLD_OMEGA_P
    r_te, r_tm = Bulk(model).amplitudes(xi, xi / C)
    np.testing.assert_allclose(r_te, r_tm, rtol=1e-12)


def test_infinite_conductivity_limit():
    xi = np.array([1e14])
    r_te, r_tm = Bulk(Plasma(1e30)).amplitudes(xi, 2 * xi / C)
    np.testing.assert_allclose([r_te[0], r_tm[0]], [-1.0, -1.0], atol=1e-12)


def test_transparent_limit_is_accurate():
    # eps - 1 ~ 1e-20: the amplitudes must be small and proportional to it, not rounding noise
    weak = Plasma(1e4)
    xi = np.array([1e14])
    r_te, r_tm = Bulk(weak).amplitudes(xi, 2 * xi / C)
    te, _ = _textbook(1.0 + 1e8 / 1e28, xi, 2 * xi / C)
    assert 0 > r_te[0] > -1e-18
    assert r_te[0] == pytest.approx(-(1e8 / 1e28) * xi[0] ** 2 / (4 * (2 * xi[0]) ** 2), rel=1e-6, abs=0)
    assert abs(r_tm[0]) < 1e-18
    assert te[0] == 0.0 or abs(te[0]) < 1e-15


def test_static_limits():
    kappa = np.array([1e6])
    zero = np.array([0.0])
    r_te, r_tm = Bulk(Drude(GOLD_OMEGA_P, 1e13)).amplitudes(zero, kappa)
    assert r_te[0] == 0.0
    assert r_tm[0] == pytest.approx(-1.0, abs=1e-15)
    r_te, _ = Bulk(Plasma(GOLD_OMEGA_P)).amplitudes(zero, kappa)
    s = np.sqrt(GOLD_OMEGA_P**2 + (C * kappa[0]) ** 2)
    assert r_te[0] == pytest.approx((C * kappa[0] - s) / (C * kappa[0] + s), rel=1e-12, abs=0)


def test_thick_slab_recovers_bulk(rng):
    model = Plasma(GOLD_OMEGA_P)
    xi, kappa = _modes(50, rng)
    slab = np.array(Slab(model, 5 * GOLD_LAMBDA_P).amplitudes(xi, kappa))
    bulk = np.array(Bulk(model).amplitudes(xi, kappa))
    assert np.max(np.abs(slab - bulk)) < 1e-3


def test_thin_slab_becomes_transparent():
    model = Plasma(GOLD_OMEGA_P)
    xi = np.array([GOLD_OMEGA_P])
    r_te, r_tm = Slab(model, 1e-15).amplitudes(xi, 2 * xi / C)
    assert abs(r_te[0]) < 1e-6 and abs(r_tm[0]) < 1e-6


def test_single_layer_stack_is_slab(rng):
    model = Drude(GOLD_OMEGA_P, 0.02 * GOLD_OMEGA_P)
    xi, kappa = _modes(100, rng)
    a = np.array(Stack(((model, 30e-9),)).amplitudes(xi, kappa))
    b = np.array(Slab(model, 30e-9).amplitudes(xi, kappa))
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)


def test_split_layer_composes_to_one_slab(rng):
    model = Plasma(GOLD_OMEGA_P)
    xi, kappa = _modes(100, rng)
    split = np.array(Stack(((model, 12e-9), (model, 18e-9))).amplitudes(xi, kappa))
    whole = np.array(Slab(model, 30e-9).amplitudes(xi, kappa))
    np.testing.assert_allclose(split, whole, rtol=1e-12, atol=1e-15)


def test_layer_on_same_substrate_is_bulk(rng):
    model = Drude(GOLD_OMEGA_P, 0.01 * GOLD_OMEGA_P)
    xi, kappa = _modes(50, rng)
    coated = np.array(Stack(((model, 20e-9),), substrate=model).amplitudes(xi, kappa))
    bulk = np.array(Bulk(model).amplitudes(xi, kappa))
    np.testing.assert_allclose(coated, bulk, rtol=1e-12, atol=1e-15)


def test_compose_with_empty_network_is_identity():
    b = ScatterPair(-0.3, 0.8, -0.1)
    out = stack_compose(ScatterPair(0.0, 1.0), b, 0.5)
    assert out.r == pytest.approx(-0.3 * 0.25, rel=1e-15, abs=0)
    assert out.t == pytest.approx(0.4, rel=1e-15, abs=0)


def test_composition_rule_explicit():
    a = ScatterPair(-0.2, 0.9, 0.15)
    b = ScatterPair(-0.6, 0.7)
    p = 0.8
    out = stack_compose(a, b, p)
    denom = 1.0 - 0.15 * (-0.6) * p**2
    assert out.r == pytest.approx(-0.2 + 0.81 * (-0.6) * p**2 / denom, rel=1e-12, abs=0)
    assert out.t == pytest.approx(0.9 * 0.7 * p / denom, rel=1e-12, abs=0)


def test_singular_composition():
    with pytest.raises(SingularCompositionError):
        stack_compose(ScatterPair(0.0, 0.0, 1.0), ScatterPair(1.0, 0.0))


def test_propagation_factor_bounded():
    with pytest.raises(DomainError):
        stack_compose(ScatterPair(0.0, 1.0), ScatterPair(0.0, 1.0), 1.5)


def test_mode_validation_and_kappa():
    mode = Mode(1e15, 2e6, "TM")
    assert mode.polarization is Polarization.TM
    assert mode.kappa == pytest.approx(np.hypot(2e6, 1e15 / C), rel=1e-12, abs=0)
    with pytest.raises(DomainError):
        Mode(0.0, 1.0)
    with pytest.raises(DomainError):
        Mode(1e15, -1.0)


def test_single_mode_helpers():
    model = Plasma(GOLD_OMEGA_P)
    mode = Mode(GOLD_OMEGA_P, 1e7, Polarization.TE)
    pair = fresnel_bulk(model, mode)
    assert pair.r**2 + pair.t**2 == pytest.approx(1.0, rel=1e-12, abs=0)
    assert mirror_reflection(Bulk(model), mode) == pytest.approx(pair.r, rel=1e-15, abs=0)
    assert slab_reflection(model, 1e-6, mode) == pytest.approx(pair.r, rel=1e-6, abs=0)
    with pytest.raises(DomainError):
        slab_reflection(model, 0.0, mode)


mirrors = st.sampled_from(["bulk", "slab", "stack"])


@settings(max_examples=200, deadline=None)
@given(kind=mirrors, wp=st.floats(1e13, 1e17), g=st.floats(0.0, 1.0), d=st.floats(1e-10, 1e-5),
       xi=st.floats(1e10, 1e18), q=st.floats(1e-3, 1e3))
def test_passive_amplitudes_bounded(kind, wp, g, d, xi, q):
    model = Drude(wp, g * wp)
    mirror = {"bulk": Bulk(model), "slab": Slab(model, d),
              "stack": Stack(((model, d), (Plasma(wp / 3), d / 2)), substrate=model)}[kind]
    kappa = xi / C * (1.0 + q)
    r_te, r_tm = mirror.amplitudes(np.array([xi]), np.array([kappa]))
    assert -1.0 <= r_te[0] <= 0.0
    assert -1.0 <= r_tm[0] <= 1.0
