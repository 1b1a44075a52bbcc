"""Dielectric response on the imaginary frequency axis.

Every model exposes three vectorised views of epsilon(i xi):

* ``epsilon(xi)`` for xi > 0,
* ``xi2_chi(xi)`` = xi^2 (epsilon - 1), which stays finite as xi -> 0,
* ``inverse_epsilon(xi)``, which also has a finite xi -> 0 limit.

The last two are what the reflection amplitudes actually need, and they let
the Matsubara m = 0 term be taken as a genuine limit instead of a 0 * inf.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import EV_TO_RAD_S, plasma_wavelength
from .errors import DomainError, ExtrapolationWarning, TableParseError, TableValidationError

UNITS = ("eV", "rad_s")


def _check_xi(xi, allow_zero=False):
    xi = np.asarray(xi, dtype=float)
    bad = ~np.isfinite(xi) | (xi < 0) if allow_zero else ~np.isfinite(xi) | (xi <= 0)
    if np.any(bad):
        raise DomainError("imaginary frequency xi must be positive and finite")
    return xi


def _as_output(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return value


class DielectricModel:
    """Base class; subclasses implement ``xi2_chi`` and ``inverse_epsilon``."""

    #: True when the model carries a relaxation rate (r_TE -> 0 as xi -> 0).
    dissipative = False

    def epsilon(self, xi):
        xi = _check_xi(xi)
        return 1.0 + self.xi2_chi(xi) / xi**2

    def xi2_chi(self, xi):
        raise NotImplementedError

    def inverse_epsilon(self, xi):
        raise NotImplementedError

    @property
    def characteristic_frequency(self):
        """Frequency scale (rad/s) above which the medium turns transparent."""
        raise NotImplementedError

    def lossless_limit(self):
        """The same medium with every relaxation rate set to zero."""
        return self


@dataclass(frozen=True)
class Plasma(DielectricModel):
    """epsilon(i xi) = 1 + omega_p^2 / xi^2."""

    omega_p: float

    def __post_init__(self):
        if not self.omega_p > 0 or not math.isfinite(self.omega_p):
            raise DomainError("plasma frequency must be positive")

    def xi2_chi(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.full_like(xi, self.omega_p**2)

    def inverse_epsilon(self, xi):
        xi2 = np.asarray(xi, dtype=float) ** 2
        return xi2 / (xi2 + self.omega_p**2)

    @property
    def characteristic_frequency(self):
        return self.omega_p

    @property
    def lambda_p(self):
        return plasma_wavelength(self.omega_p)


@dataclass(frozen=True)
class Drude(DielectricModel):
    """epsilon(i xi) = 1 + omega_p^2 / (xi (xi + gamma)); gamma = 0 is the plasma model."""

    omega_p: float
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega_p > 0 or not math.isfinite(self.omega_p):
            raise DomainError("plasma frequency must be positive")
        if not self.gamma >= 0 or not math.isfinite(self.gamma):
            raise DomainError("relaxation rate must be non-negative")

    @property
    def dissipative(self):
        return self.gamma > 0

    def xi2_chi(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.gamma == 0:
            return np.full_like(xi, self.omega_p**2)
        return xi * self.omega_p**2 / (xi + self.gamma)

    def inverse_epsilon(self, xi):
        xi = np.asarray(xi, dtype=float)
        d = xi * (xi + self.gamma)
        return d / (d + self.omega_p**2)

    @property
    def characteristic_frequency(self):
        return self.omega_p

    @property
    def lambda_p(self):
        return plasma_wavelength(self.omega_p)

    def lossless_limit(self):
        return Plasma(self.omega_p)


def epsilon_iw(model, xi):
    """Dielectric function epsilon(i xi) of ``model`` at imaginary frequency ``xi`` (rad/s)."""
    return _as_output(model.epsilon(xi), xi)


# ---------------------------------------------------------------------------
# Tabulated optical data


@dataclass(frozen=True, eq=False)
class OpticalDataTable:
    """Imaginary part of epsilon sampled on real frequencies (stored in rad/s)."""

    omega: np.ndarray
    eps_imag: np.ndarray
    source_unit: str = "rad_s"

    def __post_init__(self):
        omega = np.array(self.omega, dtype=float)
        eps_imag = np.array(self.eps_imag, dtype=float)
        if omega.ndim != 1 or omega.shape != eps_imag.shape:
            raise TableValidationError("frequency and eps_imag columns must be 1-d and equal length")
        if omega.size < 2:
            raise TableValidationError("an optical table needs at least two rows")
        if self.source_unit not in UNITS:
            raise TableValidationError(f"unknown unit {self.source_unit!r}; expected one of {UNITS}")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(eps_imag))):
            raise TableValidationError("non-finite value in table")
        if omega[0] <= 0:
            raise TableValidationError("frequencies must be positive", line=1)
        steps = np.diff(omega)
        if np.any(steps <= 0):
            raise TableValidationError("frequencies must be strictly increasing",
                                       line=int(np.argmax(steps <= 0)) + 2)
        if np.any(eps_imag < 0):
            raise TableValidationError("eps_imag must be non-negative",
                                       line=int(np.argmax(eps_imag < 0)) + 1)
        omega.flags.writeable = False
        eps_imag.flags.writeable = False
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "eps_imag", eps_imag)

    @property
    def decades(self):
        return float(np.log10(self.omega[-1] / self.omega[0]))

    def __len__(self):
        return self.omega.size


def read_two_column(path):
    """Parse a two-column numeric text file; '#' starts a comment.

    Returns two float arrays. Malformed rows raise :class:`TableParseError`
    carrying the 1-based line number.
    """
    xs, ys = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p for p in (line.split(",") if "," in line else line.split())]
            parts = [p.strip() for p in parts]
            if len(parts) != 2 or not all(parts):
                raise TableParseError(f"expected two columns, got {raw.strip()!r}", line=lineno)
            try:
                x, y = float(parts[0]), float(parts[1])
            except ValueError:
                raise TableParseError(f"non-numeric value in {raw.strip()!r}", line=lineno) from None
            xs.append(x)
            ys.append(y)
    if not xs:
        raise TableValidationError(f"{path}: no data rows")
    return np.array(xs), np.array(ys)


def load_optical_table(path, unit="eV"):
    """Read a (frequency, eps_imag) CSV and convert frequencies to rad/s."""
    if unit not in UNITS:
        raise TableValidationError(f"unknown unit {unit!r}; expected one of {UNITS}")
    omega, eps_imag = read_two_column(path)
    if unit == "eV":
        omega = omega * EV_TO_RAD_S
    return OpticalDataTable(omega, eps_imag, source_unit=unit)


def _drude_below(xi, omega_p, gamma, cutoff):
    """(2/pi) int_0^cutoff omega eps''_Drude(omega) / (omega^2 + xi^2) d omega, in closed form."""
    xi = np.asarray(xi, dtype=float)
    if gamma == 0:
        return omega_p**2 / xi**2

    def h(a):
        return np.arctan(cutoff / a) / a

    def dh(a):
        return -cutoff / (a * (a * a + cutoff * cutoff)) - np.arctan(cutoff / a) / (a * a)

    close = np.abs(xi - gamma) < 1e-4 * gamma
    safe_xi = np.where(close, 2.0 * gamma, xi)
    generic = (h(gamma) - h(safe_xi)) / (safe_xi**2 - gamma**2)
    mean = 0.5 * (xi + gamma)
    near = -dh(mean) / (2.0 * mean)
    return (2.0 / np.pi) * omega_p**2 * gamma * np.where(close, near, generic)


@dataclass(frozen=True, eq=False)
class _KKGrid:
    omega: np.ndarray
    weight: np.ndarray  # trapezoid weight in ln(omega) times omega^2 eps''


def _build_grid(table, points_per_decade, tail_decades):
    lo, hi = np.log(table.omega[0]), np.log(table.omega[-1])
    n = max(int(math.ceil((hi - lo) / math.log(10) * points_per_decade)), 2) + 1
    ln_w = np.linspace(lo, hi, n)
    ln_src = np.log(table.omega)
    positive = np.all(table.eps_imag > 0)
    if positive:
        eps = np.exp(np.interp(ln_w, ln_src, np.log(table.eps_imag)))
    else:
        eps = np.interp(ln_w, ln_src, table.eps_imag)

    # power-law continuation above the table
    if positive and tail_decades > 0:
        slope = (math.log(table.eps_imag[-1]) - math.log(table.eps_imag[-2])) / (ln_src[-1] - ln_src[-2])
        p = max(-slope, 1.0)
        step = ln_w[1] - ln_w[0]
        n_tail = int(math.ceil(tail_decades * math.log(10) / step))
        ln_tail = hi + step * np.arange(1, n_tail + 1)
        eps_tail = table.eps_imag[-1] * np.exp(-p * (ln_tail - hi))
        ln_w = np.concatenate([ln_w, ln_tail])
        eps = np.concatenate([eps, eps_tail])

    step = ln_w[1] - ln_w[0]
    trap = np.full(ln_w.size, step)
    trap[0] = trap[-1] = 0.5 * step
    omega = np.exp(ln_w)
    return _KKGrid(omega, trap * omega**2 * eps)


def kramers_kronig_iw(table, xi, extrapolation=None, points_per_decade=64, tail_decades=6.0,
                      grid=None):
    """epsilon(i xi) from tabulated eps''(omega) through the causal dispersion integral.

    epsilon(i xi) = 1 + (2/pi) int_0^inf omega eps''(omega) / (omega^2 + xi^2) d omega

    The tabulated range is integrated with the trapezoid rule on a log-uniform
    grid (log-log interpolation between samples) and continued above the table
    by a power law fitted to the last two rows. Below the table the ``extrapolation``
    Drude model contributes analytically; with ``extrapolation=None`` nothing is
    added there.
    """
    xi_arr = _check_xi(xi)
    if table.decades < 2:
        warnings.warn(
            f"optical table spans only {table.decades:.2f} decades; the result is dominated "
            "by extrapolation", ExtrapolationWarning, stacklevel=2)
    if grid is None:
        grid = _build_grid(table, points_per_decade, tail_decades)
    value = 1.0 + _table_part(grid, xi_arr)
    if extrapolation is not None:
        value = value + _drude_below(xi_arr, extrapolation.omega_p, extrapolation.gamma, table.omega[0])
    return _as_output(value, xi)


def _table_part(grid, xi):
    xi = np.asarray(xi, dtype=float)
    flat = xi.ravel()
    kernel = 1.0 / (grid.omega[None, :] ** 2 + flat[:, None] ** 2)
    return ((2.0 / np.pi) * (kernel @ grid.weight)).reshape(xi.shape)


@dataclass(frozen=True, eq=False)
class Tabulated(DielectricModel):
    """Tabulated eps'' continued by a Drude model below the lowest sample."""

    table: OpticalDataTable
    extrapolation: Drude = None
    points_per_decade: int = 64
    tail_decades: float = 6.0
    _grid: _KKGrid = field(init=False, repr=False)

    def __post_init__(self):
        if self.table.decades < 2:
            warnings.warn(
                f"optical table spans only {self.table.decades:.2f} decades; the result is "
                "dominated by extrapolation", ExtrapolationWarning, stacklevel=3)
        object.__setattr__(self, "_grid", _build_grid(self.table, self.points_per_decade,
                                                      self.tail_decades))

    @property
    def dissipative(self):
        return self.extrapolation is None or self.extrapolation.gamma > 0

    def _below(self, xi):
        # contribution of the extrapolated region multiplied by xi^2, finite at xi = 0
        if self.extrapolation is None:
            return np.zeros_like(xi)
        d = self.extrapolation
        if d.gamma == 0:
            return np.full_like(xi, d.omega_p**2)
        out = np.zeros_like(xi)
        pos = xi > 0
        out[pos] = xi[pos] ** 2 * _drude_below(xi[pos], d.omega_p, d.gamma, self.table.omega[0])
        return out

    def epsilon(self, xi):
        xi = _check_xi(xi)
        value = 1.0 + _table_part(self._grid, xi)
        if self.extrapolation is not None:
            d = self.extrapolation
            value = value + _drude_below(xi, d.omega_p, d.gamma, self.table.omega[0])
        return value

    def xi2_chi(self, xi):
        xi = np.asarray(xi, dtype=float)
        return xi**2 * _table_part(self._grid, xi) + self._below(xi)

    def inverse_epsilon(self, xi):
        xi = np.asarray(xi, dtype=float)
        table_eps = 1.0 + _table_part(self._grid, xi)
        out = np.empty_like(xi)
        pos = xi > 0
        out[pos] = 1.0 / (table_eps[pos] + self._below(xi[pos]) / xi[pos] ** 2)
        if self.extrapolation is None:
            out[~pos] = 1.0 / table_eps[~pos]
        else:
            out[~pos] = 0.0
        return out

    @property
    def characteristic_frequency(self):
        if self.extrapolation is not None:
            return self.extrapolation.omega_p
        return float(math.sqrt(self.table.omega[0] * self.table.omega[-1]))

    def lossless_limit(self):
        if self.extrapolation is None:
            return self
        return Tabulated(self.table, Drude(self.extrapolation.omega_p, 0.0),
                         self.points_per_decade, self.tail_decades)
