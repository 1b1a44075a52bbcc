"""Physical constants and unit conversions (SI throughout)."""

import math

from scipy.constants import Boltzmann, c, hbar

C = c
HBAR = hbar
KB = Boltzmann

#: 1 eV expressed as an angular frequency in rad/s.
EV_TO_RAD_S = 1.519e15

NM = 1e-9
UM = 1e-6


def ev_to_rad_s(value):
    return value * EV_TO_RAD_S


def rad_s_to_ev(value):
    return value / EV_TO_RAD_S


def plasma_wavelength(omega_p):
    """Plasma wavelength 2*pi*c/omega_p in metres."""
    return 2.0 * math.pi * C / omega_p


def plasma_frequency(lambda_p):
    """Inverse of :func:`plasma_wavelength`."""
    return 2.0 * math.pi * C / lambda_p


def thermal_frequency(temperature):
    """First Matsubara frequency 2*pi*k_B*T/hbar in rad/s."""
    return 2.0 * math.pi * KB * temperature / HBAR


def ideal_energy(L, area=1.0):
    """Zero-temperature energy between perfect plates, -hbar c pi^2 A / 720 L^3."""
    return -HBAR * C * math.pi**2 * area / (720.0 * L**3)


def ideal_force(L, area=1.0):
    """Zero-temperature force between perfect plates, hbar c pi^2 A / 240 L^4 (attraction > 0)."""
    return HBAR * C * math.pi**2 * area / (240.0 * L**4)
