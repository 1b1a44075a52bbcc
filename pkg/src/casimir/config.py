"""Flat ``key = value`` run configuration with unit-suffixed keys.

Keys are dotted (``mirror1.type = bulk``); '#' starts a comment. Quantities
carry their unit in the key name (``L_nm``, ``omega_p_ev``, ``area_cm2``)
and are converted to SI on lookup. Every lookup is recorded, so the resolved
configuration (including defaults) can be written back out verbatim.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import EV_TO_RAD_S, plasma_frequency
from .errors import ConfigError, TableError
from .materials import Drude, Plasma, Tabulated, load_optical_table
from .reflection import Bulk, Perfect, Slab, Stack

LENGTH = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9}
AREA = {"m2": 1.0, "cm2": 1e-4, "mm2": 1e-6, "um2": 1e-12}
FREQUENCY = {"rad_s": 1.0, "ev": EV_TO_RAD_S, "mev": 1e-3 * EV_TO_RAD_S}
INVERSE_LENGTH = {"per_m": 1.0, "per_um": 1e6, "per_nm": 1e9}
VARIANCE = {"m2": 1.0, "nm2": 1e-18}


@dataclass
class RunConfig:
    """Parsed key/value pairs, their source lines, and the record of resolved values."""

    values: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)
    source: str = "<config>"
    resolved: dict = field(default_factory=dict)

    # -- raw access -----------------------------------------------------

    def has(self, key):
        return key in self.values

    def has_any(self, base, units):
        return any(f"{base}_{u}" in self.values for u in units)

    def error(self, message, key=None):
        return ConfigError(message, line=self.lines.get(key), key=key)

    def raw(self, key, default=None, required=False):
        if key in self.values:
            value = self.values[key]
        elif required:
            raise ConfigError(f"missing required key '{key}'", key=key)
        else:
            value = default
        if value is not None:
            self.resolved[key] = value
        return value

    def string(self, key, default=None, required=False, choices=None):
        value = self.raw(key, default, required)
        if value is not None and choices is not None and value not in choices:
            raise self.error(f"{key} = {value!r}: expected one of {', '.join(choices)}", key)
        return value

    def number(self, key, default=None, required=False, positive=False, integer=False):
        value = self.raw(key, None if default is None else str(default), required)
        if value is None:
            return None
        try:
            number = int(value) if integer else float(value)
        except ValueError:
            raise self.error(f"{key} = {value!r} is not a number", key) from None
        if not math.isfinite(number):
            raise self.error(f"{key} must be finite", key)
        if positive and number <= 0:
            raise self.error(f"{key} must be positive", key)
        return number

    def boolean(self, key, default=False):
        value = self.raw(key, "true" if default else "false")
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise self.error(f"{key} = {value!r} is not a boolean", key)

    def quantity(self, base, units, default=None, required=False, positive=True):
        """Look up ``base_<unit>`` for whichever unit is present and return SI."""
        present = [u for u in units if f"{base}_{u}" in self.values]
        if len(present) > 1:
            keys = ", ".join(f"{base}_{u}" for u in present)
            raise self.error(f"conflicting keys {keys}", f"{base}_{present[1]}")
        if not present:
            if required:
                choices = " or ".join(f"{base}_{u}" for u in units)
                raise ConfigError(f"missing required key '{base}' (give {choices})", key=base)
            return default
        key = f"{base}_{present[0]}"
        return self.number(key, positive=positive) * units[present[0]]

    def set(self, key, value, line=None):
        self.values[key] = value
        if line is not None:
            self.lines[key] = line

    def resolved_lines(self):
        return [f"{k} = {self.resolved[k]}" for k in sorted(self.resolved)]


def parse_config_text(text, source="<config>"):
    cfg = RunConfig(source=source)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"empty key or value in {raw.strip()!r}", line=lineno)
        if key in cfg.values:
            raise ConfigError(f"duplicate key '{key}' (first on line {cfg.lines[key]})", line=lineno, key=key)
        cfg.set(key, value, lineno)
    return cfg


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config_text(text, source=str(path))


def apply_overrides(cfg, assignments):
    for item in assignments:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not 'key=value'")
        key, value = (p.strip() for p in item.split("=", 1))
        cfg.set(key, value)
    return cfg


# ---------------------------------------------------------------------------
# builders


def build_model(cfg, prefix):
    """Dielectric model from keys under ``prefix`` (``material.gold`` or ``mirror1``)."""
    model = cfg.string(f"{prefix}.model", required=True, choices=("plasma", "drude", "tabulated"))
    omega_p = cfg.quantity(f"{prefix}.omega_p", FREQUENCY)
    lambda_p = cfg.quantity(f"{prefix}.lambda_p", LENGTH)
    if omega_p is not None and lambda_p is not None:
        raise cfg.error(f"give either omega_p or lambda_p for {prefix}, not both", f"{prefix}.model")
    if lambda_p is not None:
        omega_p = plasma_frequency(lambda_p)
    gamma = cfg.quantity(f"{prefix}.gamma", FREQUENCY, default=0.0, positive=False)
    if gamma < 0:
        raise cfg.error(f"{prefix}.gamma must be non-negative", f"{prefix}.gamma")

    if model == "tabulated":
        path = cfg.string(f"{prefix}.table", required=True)
        unit = cfg.string(f"{prefix}.table_unit", cfg.raw("materials.table_unit", "eV"), choices=("eV", "rad_s"))
        try:
            table = load_optical_table(path, unit)
        except OSError as exc:
            raise cfg.error(f"cannot read optical table {path}: {exc.strerror}", f"{prefix}.table") from None
        except TableError as exc:
            raise cfg.error(f"optical table {path}: {exc}", f"{prefix}.table") from None
        extrapolation = Drude(omega_p, gamma) if omega_p is not None else None
        return Tabulated(table, extrapolation)

    if omega_p is None:
        raise ConfigError(f"missing required key '{prefix}.omega_p' (or lambda_p)", key=f"{prefix}.omega_p")
    if model == "plasma":
        return Plasma(omega_p)
    return Drude(omega_p, gamma)


def _named_model(cfg, name, key):
    prefix = f"material.{name}"
    if not cfg.has(f"{prefix}.model"):
        raise cfg.error(f"{key} refers to undefined material '{name}'", key)
    return build_model(cfg, prefix)


def _mirror_model(cfg, prefix):
    if cfg.has(f"{prefix}.material"):
        return _named_model(cfg, cfg.string(f"{prefix}.material"), f"{prefix}.material")
    return build_model(cfg, prefix)


def build_mirror(cfg, prefix):
    key = f"{prefix}.type"
    if not cfg.has(key):
        raise ConfigError(f"missing mirror definition: key '{key}' is required", key=key)
    kind = cfg.string(key, choices=("perfect", "bulk", "slab", "stack", "same"))
    if kind == "same":
        if prefix == "mirror1":
            raise cfg.error("mirror1.type cannot be 'same'", key)
        return build_mirror(cfg, "mirror1")
    if kind == "perfect":
        return Perfect()
    if kind == "bulk":
        return Bulk(_mirror_model(cfg, prefix))
    if kind == "slab":
        thickness = cfg.quantity(f"{prefix}.thickness", LENGTH, required=True)
        return Slab(_mirror_model(cfg, prefix), thickness)
    layers_key = f"{prefix}.layers"
    spec = cfg.string(layers_key, required=True)
    layers = []
    for item in spec.split(","):
        try:
            name, thickness = (p.strip() for p in item.split(":"))
            layers.append((_named_model(cfg, name, layers_key), float(thickness) * 1e-9))
        except ValueError:
            raise cfg.error(f"{layers_key}: expected 'material:thickness_nm, ...', got {item.strip()!r}",
                            layers_key) from None
    substrate = cfg.string(f"{prefix}.substrate", "vacuum")
    sub_model = None if substrate == "vacuum" else _named_model(cfg, substrate, f"{prefix}.substrate")
    return Stack(tuple(layers), sub_model)


def separations(cfg):
    """Either a single separation or a sweep, as a 1-d array (m) and a sweep flag."""
    if cfg.has_any("L_sweep.start", LENGTH):
        start = cfg.quantity("L_sweep.start", LENGTH, required=True)
        stop = cfg.quantity("L_sweep.stop", LENGTH, required=True)
        count = cfg.number("L_sweep.count", 20, positive=True, integer=True)
        spacing = cfg.string("L_sweep.spacing", "linear", choices=("linear", "log"))
        if spacing == "log":
            return np.geomspace(start, stop, count), True
        return np.linspace(start, stop, count), True
    return np.array([cfg.quantity("L", LENGTH, required=True)]), False

