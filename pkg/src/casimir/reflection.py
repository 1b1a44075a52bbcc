"""TE/TM reflection amplitudes at imaginary frequency.

On the imaginary axis every amplitude is real, so everything here is plain
float arithmetic and vectorises over (xi, kappa) arrays. Amplitudes are the
ones seen from the vacuum (cavity) side of a mirror.

Sign convention: both r_TE and r_TM are non-positive for passive media, and
a perfect mirror has r_TE = r_TM = -1, the epsilon -> inf limit of the bulk
formulas. Only products r1 * r2 enter physical results.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constants import C
from .errors import DomainError, SingularCompositionError
from .materials import DielectricModel


class Polarization(str, Enum):
    TE = "TE"
    TM = "TM"


POLARIZATIONS = (Polarization.TE, Polarization.TM)


@dataclass(frozen=True)
class Mode:
    """A field mode: imaginary frequency xi, transverse wavevector k, polarization."""

    xi: float
    k: float
    polarization: Polarization = Polarization.TE
    kappa: float = field(init=False)

    def __post_init__(self):
        if not (self.xi > 0 and math.isfinite(self.xi)):
            raise DomainError("mode frequency xi must be positive and finite")
        if not (self.k >= 0 and math.isfinite(self.k)):
            raise DomainError("transverse wavevector k must be non-negative and finite")
        object.__setattr__(self, "polarization", Polarization(self.polarization))
        object.__setattr__(self, "kappa", math.sqrt(self.k**2 + (self.xi / C) ** 2))


@dataclass(frozen=True)
class ScatterPair:
    """Reflection and transmission amplitudes of a two-port network.

    ``r`` is seen from the incidence (vacuum) side and ``r_back`` from the
    opposite side; ``r_back=None`` marks a symmetric network. ``t`` is the
    symmetrised transmission sqrt(t t'), so ``t**2`` is the round-trip
    transmission product that enters the composition rule.
    """

    r: float
    t: float
    r_back: float = None

    @property
    def r_inner(self):
        return self.r if self.r_back is None else self.r_back

    def reversed(self):
        return ScatterPair(self.r_inner, self.t, self.r)


def stack_compose(a, b, propagation=1.0):
    """Pile network ``b`` behind network ``a`` with a propagation factor between them.

    r_AB = r_A + t_A^2 r_B' / (1 - r_A,back r_B'),  t_AB = t_A t_B' / (1 - r_A,back r_B')

    where the primed B amplitudes have the propagation factor absorbed
    (r_B' = r_B p^2, t_B' = t_B p). Works elementwise on arrays.
    """
    p = np.asarray(propagation, dtype=float)
    if np.any(np.abs(p) > 1):
        raise DomainError("propagation factor must satisfy |p| <= 1")
    r_b = b.r * p * p
    t_b = b.t * p
    denom = 1.0 - a.r_inner * r_b
    if np.any(denom == 0):
        raise SingularCompositionError("r_A * r_B == 1: the composed network has no finite response")
    r = a.r + a.t**2 * r_b / denom
    t = a.t * t_b / denom
    r_back = b.r_inner + b.t**2 * p * p * a.r_inner / denom
    return ScatterPair(_scalar(r), _scalar(t), _scalar(r_back))


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


# ---------------------------------------------------------------------------
# vectorised kernels


def _interface(model, xi, ckappa):
    """Vacuum/medium interface amplitudes and the in-medium wave number s = c * kappa_medium.

    Written in cancellation-free form so that r -> 0 is accurate deep in the
    transparent regime; ``xi = 0`` is handled as the limit.
    """
    xi = np.asarray(xi, dtype=float)
    chi = model.xi2_chi(xi)
    inv = model.inverse_epsilon(xi)
    s = np.sqrt(chi + ckappa**2)
    r_te = -chi / (s + ckappa) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        one_minus_inv = np.where(xi > 0, chi * inv / np.where(xi > 0, xi, 1.0) ** 2, 1.0)
    num = inv**2 * chi - ckappa**2 * one_minus_inv * (1.0 + inv)
    r_tm = num / (s * inv + ckappa) ** 2
    return r_te, r_tm, s


def _slab(r_si, s, thickness):
    e2 = np.exp(-2.0 * thickness * s / C)
    return r_si * (1.0 - e2) / (1.0 - r_si**2 * e2)


def _slab_pair(r_si, s, thickness):
    """Symmetric slab in vacuum as a ScatterPair (used for stacks)."""
    e1 = np.exp(-thickness * s / C)
    t_si = np.sqrt(1.0 - r_si**2)
    interface = ScatterPair(r_si, t_si, -r_si)
    return stack_compose(interface, interface.reversed(), e1)


class Mirror:
    """Base class for reflection-amplitude providers."""

    def amplitudes(self, xi, kappa):
        """Return (r_TE, r_TM) arrays for imaginary frequency xi and kappa (1/m)."""
        raise NotImplementedError

    def models(self):
        return ()

    @property
    def characteristic_frequency(self):
        freqs = [m.characteristic_frequency for m in self.models()]
        return min(freqs) if freqs else math.inf

    @property
    def dissipative(self):
        return any(m.dissipative for m in self.models())

    def lossless_limit(self):
        return self


@dataclass(frozen=True)
class Perfect(Mirror):
    def amplitudes(self, xi, kappa):
        shape = np.broadcast(np.asarray(xi), np.asarray(kappa)).shape
        minus_one = np.full(shape, -1.0)
        return minus_one, minus_one.copy()


@dataclass(frozen=True)
class Bulk(Mirror):
    model: DielectricModel

    def amplitudes(self, xi, kappa):
        r_te, r_tm, _ = _interface(self.model, xi, C * np.asarray(kappa, dtype=float))
        return r_te, r_tm

    def models(self):
        return (self.model,)

    def lossless_limit(self):
        return Bulk(self.model.lossless_limit())


@dataclass(frozen=True)
class Slab(Mirror):
    model: DielectricModel
    thickness: float

    def __post_init__(self):
        if not self.thickness > 0:
            raise DomainError("slab thickness must be positive")

    def amplitudes(self, xi, kappa):
        r_te, r_tm, s = _interface(self.model, xi, C * np.asarray(kappa, dtype=float))
        return _slab(r_te, s, self.thickness), _slab(r_tm, s, self.thickness)

    def models(self):
        return (self.model,)

    def lossless_limit(self):
        return Slab(self.model.lossless_limit(), self.thickness)


@dataclass(frozen=True)
class Stack(Mirror):
    """Layers listed from the vacuum side inward, over a bulk substrate (None = vacuum).

    Adjacent layers are joined through zero-thickness vacuum gaps, which is
    exact and keeps every building block a symmetric slab.
    """

    layers: tuple
    substrate: DielectricModel = None

    def __post_init__(self):
        layers = tuple((model, float(d)) for model, d in self.layers)
        if not layers:
            raise DomainError("a stack needs at least one layer")
        if any(d <= 0 for _, d in layers):
            raise DomainError("layer thicknesses must be positive")
        object.__setattr__(self, "layers", layers)

    def amplitudes(self, xi, kappa):
        ckappa = C * np.asarray(kappa, dtype=float)
        shape = np.broadcast(np.asarray(xi), ckappa).shape
        result = []
        for index in range(2):
            if self.substrate is None:
                acc = ScatterPair(np.zeros(shape), np.ones(shape))
            else:
                r_sub = _interface(self.substrate, xi, ckappa)[index]
                acc = ScatterPair(r_sub, np.sqrt(1.0 - r_sub**2), -r_sub)
            for model, d in reversed(self.layers):
                amps = _interface(model, xi, ckappa)
                acc = stack_compose(_slab_pair(amps[index], amps[2], d), acc)
            result.append(np.broadcast_to(acc.r, shape).astype(float))
        return result[0], result[1]

    def models(self):
        out = tuple(m for m, _ in self.layers)
        return out + ((self.substrate,) if self.substrate is not None else ())

    def lossless_limit(self):
        return Stack(tuple((m.lossless_limit(), d) for m, d in self.layers),
                     None if self.substrate is None else self.substrate.lossless_limit())


def reflection_amplitudes(mirror, xi, kappa):
    """Vectorised (r_TE, r_TM) of ``mirror``; xi = 0 gives the static limit."""
    return mirror.amplitudes(xi, kappa)


def _pick(mirror, mode):
    r_te, r_tm = mirror.amplitudes(np.array(mode.xi), np.array(mode.kappa))
    return float(r_te if mode.polarization is Polarization.TE else r_tm)


def fresnel_bulk(model, mode):
    """Vacuum/bulk interface amplitudes for ``mode``."""
    r_te, r_tm, _ = _interface(model, np.array(mode.xi), C * np.array(mode.kappa))
    r = float(r_te if mode.polarization is Polarization.TE else r_tm)
    return ScatterPair(r, math.sqrt(1.0 - r * r), -r)


def slab_reflection(model, D, mode):
    """Fabry-Perot reflection of a slab of thickness ``D`` in vacuum."""
    if not D > 0:
        raise DomainError("slab thickness must be positive")
    return _pick(Slab(model, D), mode)


def mirror_reflection(mirror, mode):
    return _pick(mirror, mode)
