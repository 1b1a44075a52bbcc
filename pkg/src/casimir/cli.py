"""Command-line front end: ``casimir <verb> --config run.cfg [--out table.csv]``.

Exit codes: 0 success, 2 configuration or domain error, 3 convergence failure.
"""

import argparse
import io
import math
import sys
import warnings

import numpy as np

from . import __version__
from .config import (AREA, FREQUENCY, INVERSE_LENGTH, LENGTH, VARIANCE, apply_overrides, build_mirror,
                     build_model, load_config, parse_config_text, separations)
from .constants import EV_TO_RAD_S, ideal_force, plasma_frequency, rad_s_to_ev
from .errors import CasimirError, ConfigError, ConvergenceError, DomainError, OutOfRegimeError, TableError
from .geometry import SphereConfig, energy_ps, force_ps
from .lifshitz import CavityConfig, QuadratureSpec, casimir_energy_pp, casimir_force_pp, \
    energy_derivatives_pp
from .materials import Drude, Plasma, epsilon_iw
from .perturbations import (CorrugationSpec, RoughnessSpectrum, lateral_energy_pfa, lateral_force_ps_pfa,
                            load_roughness_spectrum, roughness_energy_pfa, roughness_sensitivity_ratio)
from .reflection import Bulk
from .thermal import M0Prescription, SeriesSpec, ThermalConfig, matsubara_energy, matsubara_force, \
    thermal_comparison

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3

SHORT_DISTANCE_ALPHA = 1.193


class Run:
    """State shared by one verb: config, quadrature, output buffers."""

    def __init__(self, verb, cfg, out):
        self.verb = verb
        self.cfg = cfg
        self.out = out or cfg.raw("output.path")
        self.report = []
        self.columns = None
        self.rows = []
        self.quad = QuadratureSpec(
            rel_tol=cfg.number("quad.rel_tol", 1e-8, positive=True),
            max_subdivisions=cfg.number("quad.max_subdivisions", 200, positive=True, integer=True),
        )

    def say(self, text):
        self.report.append(text)

    def table(self, columns, rows):
        self.columns = columns
        self.rows = rows

    def csv_text(self):
        buf = io.StringIO()
        buf.write(f"# casimir {self.verb} {__version__}\n")
        buf.write(f"# config source: {self.cfg.source}\n")
        for line in self.cfg.resolved_lines():
            buf.write(f"# {line}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(f"{float(v):.11e}" for v in row) + "\n")
        return buf.getvalue()


def _cavity(run, L):
    cfg = run.cfg
    m1 = build_mirror(cfg, "mirror1")
    m2 = build_mirror(cfg, "mirror2")
    area = cfg.quantity("area", AREA, default=1e-4)
    if not cfg.has_any("area", AREA):
        cfg.resolved["area_m2"] = repr(area)
    temperature = cfg.number("temperature_K", 0.0)
    return CavityConfig(m1, m2, L, area, temperature)


def _sphere(run, L):
    cfg = run.cfg
    geometry = cfg.string("geometry", "pp", choices=("pp", "ps"))
    if geometry == "pp":
        return None
    return SphereConfig(cfg.quantity("sphere.R", LENGTH, required=True), L)


def _thermal_force(cavity, quad):
    result = matsubara_force(cavity, quad=quad)
    return result.value, result.error


def cmd_force(run):
    Ls, sweep = separations(run.cfg)
    rows = []
    for L in Ls:
        cavity = _cavity(run, L)
        sphere = _sphere(run, L)
        if cavity.temperature > 0:
            value, error = _thermal_force(cavity, run.quad)
        else:
            estimate = casimir_force_pp(cavity, run.quad)
            value, error = estimate.value, estimate.error
        eta = value / ideal_force(L, cavity.area)
        row = [L, value, error, eta]
        if sphere is not None:
            row.append(force_ps(cavity, sphere, run.quad).value)
        rows.append(row)
    columns = ["L_m", "force_N", "force_error_N", "eta_F"]
    if len(rows[0]) == 5:
        columns.append("force_ps_N")
    run.table(columns, rows)
    if not sweep:
        L, value, error, eta = rows[0][:4]
        run.say(f"L        = {L:.6e} m")
        run.say(f"F_PP     = {value:.6e} N  (+/- {error:.1e} N, {value * 1e6:.6g} uN)")
        run.say(f"eta_F    = {eta:.6f}")
        if len(rows[0]) == 5:
            run.say(f"F_PS     = {rows[0][4]:.6e} N  (PFA)")
    else:
        run.say(f"{len(rows)} separations from {Ls[0]:.4e} m to {Ls[-1]:.4e} m")


def cmd_energy(run):
    Ls, sweep = separations(run.cfg)
    rows = []
    for L in Ls:
        cavity = _cavity(run, L)
        sphere = _sphere(run, L)
        if cavity.temperature > 0:
            result = matsubara_energy(cavity, quad=run.quad)
            value, error = result.value, result.error
            curvature = math.nan
        else:
            estimate = casimir_energy_pp(cavity, run.quad)
            value, error = estimate.value, estimate.error
            curvature = energy_derivatives_pp(cavity, run.quad, order=2).value
        row = [L, value, error, curvature]
        if sphere is not None:
            row.append(energy_ps(cavity, sphere, run.quad).value if cavity.temperature == 0 else math.nan)
        rows.append(row)
    columns = ["L_m", "energy_J", "energy_error_J", "energy_curvature_J_per_m2"]
    if len(rows[0]) == 5:
        columns.append("energy_ps_J")
    run.table(columns, rows)
    if not sweep:
        run.say(f"L        = {rows[0][0]:.6e} m")
        run.say(f"E_PP     = {rows[0][1]:.6e} J  (+/- {rows[0][2]:.1e} J)")
        if not math.isnan(rows[0][3]):
            run.say(f"E''_PP   = {rows[0][3]:.6e} J/m^2")
        if len(rows[0]) == 5:
            run.say(f"E_PS     = {rows[0][4]:.6e} J  (PFA)")
    else:
        run.say(f"{len(rows)} separations from {Ls[0]:.4e} m to {Ls[-1]:.4e} m")


def cmd_eta_scan(run):
    cfg = run.cfg
    lambda_p = cfg.quantity("eta_scan.lambda_p", LENGTH, default=137e-9)
    cfg.resolved.setdefault("eta_scan.lambda_p_m", repr(lambda_p))
    start = cfg.number("eta_scan.start", 1e-3, positive=True)
    stop = cfg.number("eta_scan.stop", 1e3, positive=True)
    count = cfg.number("eta_scan.count", 25, positive=True, integer=True)
    ratio = cfg.number("eta_scan.gamma_over_omega_p", 4e-3)
    if ratio < 0:
        raise cfg.error("eta_scan.gamma_over_omega_p must be non-negative", "eta_scan.gamma_over_omega_p")
    omega_p = plasma_frequency(lambda_p)
    plasma, drude = Bulk(Plasma(omega_p)), Bulk(Drude(omega_p, ratio * omega_p))
    rows = []
    for x in np.geomspace(start, stop, count):
        L = x * lambda_p
        eta_p = casimir_force_pp(CavityConfig(plasma, plasma, L), run.quad).value / ideal_force(L)
        eta_d = casimir_force_pp(CavityConfig(drude, drude, L), run.quad).value / ideal_force(L)
        rows.append([x, eta_p, eta_d, SHORT_DISTANCE_ALPHA * x])
    run.table(["L_over_lambda_p", "eta_F_plasma", "eta_F_drude", "eta_short_asymptote"], rows)
    worst = max(abs(r[1] - r[2]) for r in rows)
    run.say(f"{count} points, L/lambda_p from {start:g} to {stop:g}; max |eta_plasma - eta_drude| = {worst:.4f}")


def cmd_thermal(run):
    cfg = run.cfg
    temperature = cfg.number("temperature_K", 0.0)
    if temperature <= 0:
        raise cfg.error("temperature_K must be positive for 'thermal'; use the 'force' verb at T = 0",
                        "temperature_K")
    prescription = cfg.string("thermal.m0_prescription", M0Prescription.HALF_WEIGHT_LIMIT.value,
                              choices=[p.value for p in M0Prescription])
    series = SeriesSpec(n_max=cfg.number("thermal.n_max", 200, positive=True, integer=True))
    L = cfg.quantity("L", LENGTH, required=True)
    cavity = _cavity(run, L)
    report = thermal_comparison(cavity, ThermalConfig(temperature, prescription), series, run.quad)
    m, s = report.matsubara, report.series
    run.say(f"T = {temperature:g} K, L = {L:.6e} m, m=0 prescription: {prescription}")
    run.say(f"Matsubara sum   F = {m.value:.9e} N  (+/- {m.error:.1e}, {m.terms} terms)")
    status = "" if s.converged else f"  NOT CONVERGED within n_max = {series.n_max}; partial sum"
    run.say(f"series form     F = {s.value:.9e} N  (+/- {s.error:.1e}, {s.terms} terms){status}")
    run.say(f"difference        = {report.difference:.3e} N  (relative {report.relative_difference:.3e})")
    run.say(f"expected from m=0 TE bookkeeping = {report.expected_difference:.3e} N")
    for name, value in report.m0_te_terms.items():
        run.say(f"  m=0 TE term [{name:>17}] = {value:.6e} N")
    run.say(f"prescription sensitive: {'yes' if report.prescription_sensitive else 'no'}")
    run.table(["temperature_K", "L_m", "matsubara_force_N", "series_force_N", "difference_N",
               "expected_difference_N"],
              [[temperature, L, m.value, s.value, report.difference, report.expected_difference]])


def _roughness(cfg):
    if cfg.has("roughness.spectrum"):
        path = cfg.string("roughness.spectrum")
        try:
            return load_roughness_spectrum(path)
        except OSError as exc:
            raise cfg.error(f"cannot read roughness spectrum {path}: {exc.strerror}", "roughness.spectrum") from None
        except TableError as exc:
            raise cfg.error(f"roughness spectrum {path}: {exc}", "roughness.spectrum") from None
    variance = cfg.quantity("roughness.variance", VARIANCE, positive=False)
    rms = cfg.quantity("roughness.a", LENGTH, positive=False)
    if variance is None and rms is None:
        raise ConfigError("missing required key 'roughness.a' (or roughness.variance / roughness.spectrum)",
                          key="roughness.a")
    if variance is not None and rms is not None:
        raise cfg.error("give roughness.a or roughness.variance, not both", "roughness.a_nm")
    return RoughnessSpectrum(variance=variance if variance is not None else rms * rms)


def cmd_roughness(run):
    cfg = run.cfg
    roughness = _roughness(cfg)
    Ls, sweep = separations(cfg)
    rows = []
    for L in Ls:
        cavity = _cavity(run, L)
        energy = casimir_energy_pp(cavity, run.quad).value
        delta = roughness_energy_pfa(cavity, roughness, run.quad).value
        rows.append([L, energy, delta, delta / energy])
    run.table(["L_m", "energy_J", "roughness_energy_J", "relative_correction"], rows)
    if not sweep:
        run.say(f"a^2      = {roughness.a2:.6e} m^2")
        run.say(f"E_PP     = {rows[0][1]:.6e} J")
        run.say(f"dE (PFA) = {rows[0][2]:.6e} J  (relative {rows[0][3]:.6e})")
    k = cfg.quantity("roughness.k", INVERSE_LENGTH)
    if k is not None:
        lambda_p = cfg.quantity("roughness.lambda_p", LENGTH, required=True)
        try:
            ratio, regime = roughness_sensitivity_ratio(k, Ls[0], lambda_p)
        except OutOfRegimeError as exc:
            run.say(f"sensitivity ratio: {exc}")
        else:
            flag = "" if regime.validity else " (chain holds only marginally)"
            run.say(f"sensitivity ratio r_R = {ratio:.6g} in regime {regime.regime.value}{flag}")


def _corrugation(cfg, b=None):
    a1 = cfg.quantity("corrugation.a1", LENGTH, required=True)
    a2 = cfg.quantity("corrugation.a2", LENGTH, required=True)
    k = cfg.quantity("corrugation.k", INVERSE_LENGTH)
    period = cfg.quantity("corrugation.period", LENGTH)
    if (k is None) == (period is None):
        raise ConfigError("give exactly one of corrugation.k_per_nm (or _per_m) and corrugation.period_um",
                          key="corrugation.k")
    k = k if k is not None else 2.0 * math.pi / period
    if b is None:
        b = cfg.quantity("corrugation.b", LENGTH, positive=False)
        if b is None:
            b = math.pi / (2.0 * k)
            cfg.resolved.setdefault("corrugation.b_m", repr(b))
    return CorrugationSpec(a1, a2, k, b)


def cmd_lateral(run):
    cfg = run.cfg
    L = cfg.quantity("L", LENGTH, required=True)
    cavity = _cavity(run, L)
    sphere = SphereConfig(cfg.quantity("sphere.R", LENGTH, required=True), L)
    corr = _corrugation(cfg)
    amplitude = lateral_force_ps_pfa(corr.shifted(math.pi / (2.0 * corr.k)), sphere, cavity, run.quad)
    at_b = lateral_force_ps_pfa(corr, sphere, cavity, run.quad)
    plane = lateral_energy_pfa(cavity, corr, run.quad)
    run.say(f"PFA lateral force amplitude = {amplitude.value:.6e} N ({amplitude.value * 1e12:.4g} pN)")
    run.say(f"at b = {corr.b:.4e} m: F_lat = {at_b.value:.6e} N; plane-plane dE = {plane.value:.6e} J")
    count = cfg.number("corrugation.b_sweep.count", 0, integer=True)
    rows = []
    if count > 0:
        scale = amplitude.value
        for b in np.linspace(0.0, corr.wavelength, count):
            rows.append([b, corr.k * b, scale * math.sin(corr.k * b)])
    else:
        rows.append([corr.b, corr.k * corr.b, at_b.value])
    run.table(["b_m", "kb_rad", "lateral_force_N"], rows)


def cmd_material_show(run):
    cfg = run.cfg
    names = sorted({key.split(".")[1] for key in cfg.values if key.startswith("material.") and key.count(".") >= 2})
    if not names:
        raise ConfigError("no materials defined (expected keys like material.gold.model)", key="material")
    models = [build_model(cfg, f"material.{name}") for name in names]
    start = cfg.quantity("show.xi_start", FREQUENCY, default=1e-3 * EV_TO_RAD_S)
    stop = cfg.quantity("show.xi_stop", FREQUENCY, default=1e2 * EV_TO_RAD_S)
    count = cfg.number("show.count", 41, positive=True, integer=True)
    cfg.resolved.setdefault("show.xi_start_rad_s", repr(start))
    cfg.resolved.setdefault("show.xi_stop_rad_s", repr(stop))
    xi = np.geomspace(start, stop, count)
    columns = np.array([np.atleast_1d(epsilon_iw(m, xi)) for m in models])
    run.table(["xi_rad_s", "xi_eV"] + [f"eps_{n}" for n in names],
              [[x, rad_s_to_ev(x), *columns[:, i]] for i, x in enumerate(xi)])
    for name, model in zip(names, models):
        run.say(f"{name}: {model!r}")


VERBS = {
    "force": (cmd_force, "plane-plane force (and PFA plane-sphere force)"),
    "energy": (cmd_energy, "plane-plane energy and its second derivative"),
    "eta-scan": (cmd_eta_scan, "force reduction factor for plasma and Drude mirrors"),
    "thermal": (cmd_thermal, "Matsubara and series thermal forces side by side"),
    "roughness": (cmd_roughness, "PFA roughness correction and sensitivity ratio"),
    "lateral": (cmd_lateral, "PFA lateral force between corrugated sphere and plate"),
    "material-show": (cmd_material_show, "tabulate epsilon(i xi) of configured materials"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value configuration file")
    common.add_argument("--out", help="write the CSV table here")
    common.add_argument("--rel-tol", type=float, help="relative quadrature tolerance")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for interface stability; computations run single-threaded")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override or add a configuration key (repeatable)")
    parser = argparse.ArgumentParser(prog="casimir", description="Casimir forces between real mirrors")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, (_, text) in VERBS.items():
        sub.add_parser(verb, parents=[common], help=text, description=text)
    return parser


def run_verb(verb, cfg, out=None):
    """Execute ``verb`` on a parsed configuration; returns the finished :class:`Run`."""
    run = Run(verb, cfg, out)
    VERBS[verb][0](run)
    return run


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else parse_config_text("", "<command line>")
        apply_overrides(cfg, args.set)
        if args.rel_tol is not None:
            if not args.rel_tol > 0:
                raise ConfigError("--rel-tol must be positive")
            cfg.set("quad.rel_tol", repr(args.rel_tol))
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            run = run_verb(args.verb, cfg, args.out)
    except (ConfigError, DomainError, TableError, OutOfRegimeError) as exc:
        print(f"casimir {args.verb}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        partial = "" if exc.partial is None else f" (partial value {exc.partial:.6e})"
        print(f"casimir {args.verb}: convergence failure: {exc}{partial}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except CasimirError as exc:
        print(f"casimir {args.verb}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    seen = set()
    for w in caught:
        text = str(w.message)
        if text not in seen:
            seen.add(text)
            print(f"warning: {text}", file=sys.stderr)
    for line in run.report:
        print(line)
    if run.out:
        with open(run.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(run.csv_text())
        print(f"wrote {run.out}")
    elif len(run.rows) > 1:
        sys.stdout.write(run.csv_text())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
