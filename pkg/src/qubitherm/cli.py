"""Command line front end.

Four subcommands drive the library end to end:

- ``discriminate``: optimal-observable expectation curves for each probe,
  with Monte Carlo error bars from simulated tomography, plus the optimal
  interaction time per probe.
- ``free-energy``: dU, dS, dF records along the time grid for every
  probe/bath combination.
- ``calibration``: interaction time versus birefringent phase, and
  temperature versus mixing weight, with marked rows at the configured
  bath occupations.
- ``simulate-experiment``: the full optical pipeline (phase mask, loop
  interferometer, tomography with noise, reconstruction, mixing) against
  the closed-form prediction.

Output is CSV (17 significant digits) or JSON (sorted keys); given the
same configuration and master seed, repeated runs are byte identical.
Exit codes: 0 success, 2 configuration problem, 3 runtime failure
(including any per-row failure in ``simulate-experiment``).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from ._kernels import KIND_FIDELITY, backend_name, functional_values, stokes_bloch
from .channel import (
    BathSpec,
    lindblad_closed_form,
    params_from_bath,
    phi_from_tau,
    tau_from_phase,
    temperature_from_occupation,
    temperature_from_p,
    occupation_from_temperature,
)
from .errors import ConfigError, QubithermError
from .optics import PairSelector, simulate_kraus_pair
from .qubit import (
    Hamiltonian,
    ProbeState,
    bloch_from_density,
    density_from_bloch,
    density_from_ket,
    ket_from_probe,
)
from .thermometry import (
    THERMALIZATION_TAU,
    discrimination_curve,
    free_energy_change,
    free_energy_trajectory,
    optimal_time,
)
from .tomography import (
    NoiseModel,
    TomographyDataset,
    dataset_to_csv,
    derive_seed,
    ideal_intensities,
    monte_carlo_errors,
    noisy_intensity_block,
)

# Slack when counting grid steps, so stop values that are an exact
# multiple of the step in real arithmetic stay included despite round-off.
_GRID_EPS = 1e-9

DISCRIMINATE_COLUMNS = (
    "row_type", "probe_theta", "tau", "ev_cold", "ev_hot", "separation",
    "mc_ev_cold_mean", "mc_ev_cold_std", "mc_ev_hot_mean", "mc_ev_hot_std",
    "tau_star", "separation_max")

FREE_ENERGY_COLUMNS = (
    "row_type", "probe_theta", "nbar", "temperature", "tau",
    "dU", "dS", "dF", "dF_normalized", "dF_inf")

CALIBRATION_COLUMNS = (
    "table", "row_type", "phi", "tau_cold", "tau_hot",
    "p", "temperature", "nbar_recovered")

SIMULATE_COLUMNS = (
    "status", "probe_theta", "nbar", "tau", "phi", "seed_base",
    "rx_theory", "ry_theory", "rz_theory", "rx_est", "ry_est", "rz_est",
    "fidelity_est", "mc_fidelity_mean", "mc_fidelity_std",
    "mc_rx_mean", "mc_rx_std", "mc_ry_mean", "mc_ry_std",
    "mc_rz_mean", "mc_rz_std", "message")

CALIBRATION_PHI_GRID = (0.0, 3.0, 61)
CALIBRATION_P_GRID = (0.01, 0.49, 49)

SEED_RULE = (
    "child = SeedSequence([parent, *path]) as uint64; "
    "row base uses path (probe_index, bath_index, tau_index); "
    "per-sample datasets use path (sample_index, pair_slot) from the row base "
    "with slot 0 = damp_vertical, slot 1 = damp_horizontal; "
    "discriminate error bars use path (probe_index, tau_index, bath_slot) "
    "with slot 0 = cold, slot 1 = hot, then (sample_index) per draw")


@dataclass(frozen=True)
class ExperimentConfig:
    """All run parameters; the JSON config file mirrors these field names.

    ``tau_grid`` is ``(start, stop, step)``, inclusive of ``stop`` when it
    is a whole number of steps away from ``start``.
    """

    nbar_cold: float = 5.5
    nbar_hot: float = 9.5
    probe_thetas: tuple = (0.0, 0.5 * math.pi, math.pi)
    tau_grid: tuple = (0.0, 1.0, 0.02)
    noise_sigma: float = 0.01
    mc_samples: int = 100
    master_seed: int = 12345
    omega: float = 1.0

    def __post_init__(self):
        def fail(msg):
            raise ConfigError(msg)

        for name in ("nbar_cold", "nbar_hot", "noise_sigma", "omega"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                fail("%s must be a number, got %r" % (name, v))
            object.__setattr__(self, name, float(v))
            if not math.isfinite(getattr(self, name)):
                fail("%s must be finite" % (name,))
        if self.nbar_cold < 0.0:
            fail("nbar_cold must be non-negative, got %r" % (self.nbar_cold,))
        if not self.nbar_cold < self.nbar_hot:
            fail("need nbar_cold < nbar_hot, got %r >= %r"
                 % (self.nbar_cold, self.nbar_hot))
        if not 0.0 <= self.noise_sigma < 0.5:
            fail("noise_sigma must lie in [0, 0.5), got %r" % (self.noise_sigma,))
        if self.omega <= 0.0:
            fail("omega must be positive, got %r" % (self.omega,))

        for name in ("mc_samples", "master_seed"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                fail("%s must be an integer, got %r" % (name, v))
            if v < 0:
                fail("%s must be non-negative, got %r" % (name, v))

        thetas = self.probe_thetas
        if not isinstance(thetas, (list, tuple)) or len(thetas) == 0:
            fail("probe_thetas must be a non-empty list of angles")
        clean = []
        for v in thetas:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                fail("probe_thetas entries must be numbers, got %r" % (v,))
            v = float(v)
            if not math.isfinite(v) or v < 0.0 or v > math.pi:
                fail("probe angles must lie in [0, pi], got %r" % (v,))
            clean.append(v)
        object.__setattr__(self, "probe_thetas", tuple(clean))

        grid = self.tau_grid
        if not isinstance(grid, (list, tuple)) or len(grid) != 3:
            fail("tau_grid must be [start, stop, step]")
        vals = []
        for v in grid:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                fail("tau_grid entries must be numbers, got %r" % (v,))
            vals.append(float(v))
        start, stop, step = vals
        if not all(math.isfinite(v) for v in vals):
            fail("tau_grid entries must be finite")
        if start < 0.0 or stop <= start or step <= 0.0:
            fail("tau_grid needs start >= 0, stop > start, step > 0; got %r"
                 % (vals,))
        object.__setattr__(self, "tau_grid", (start, stop, step))

    def taus(self) -> np.ndarray:
        start, stop, step = self.tau_grid
        count = int(math.floor((stop - start) / step + _GRID_EPS)) + 1
        return np.array([start + k * step for k in range(count)])

    def as_dict(self) -> dict:
        return {
            "nbar_cold": self.nbar_cold,
            "nbar_hot": self.nbar_hot,
            "probe_thetas": list(self.probe_thetas),
            "tau_grid": list(self.tau_grid),
            "noise_sigma": self.noise_sigma,
            "mc_samples": self.mc_samples,
            "master_seed": self.master_seed,
            "omega": self.omega,
        }


_CONFIG_FIELDS = tuple(f.name for f in fields(ExperimentConfig))


def load_config(path) -> ExperimentConfig:
    """Read a JSON config file; unknown keys are an error, missing keys default."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError("cannot read config %r: %s" % (str(path), exc))
    except json.JSONDecodeError as exc:
        raise ConfigError("config %r is not valid JSON: %s" % (str(path), exc))
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(raw) - set(_CONFIG_FIELDS))
    if unknown:
        raise ConfigError(
            "unknown config keys %r (expected a subset of %r)"
            % (unknown, list(_CONFIG_FIELDS)))
    return ExperimentConfig(**raw)


# ---------------------------------------------------------------------------
# output formatting


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value.replace(",", ";").replace("\n", " ").replace("\r", " ")
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".17g")


def _native(value):
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    return float(value)


def render_table(command: str, columns, rows, fmt: str) -> str:
    """Render rows (dicts keyed by column name) as CSV or JSON text."""
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_format_cell(row.get(c)) for c in columns))
        return "\n".join(lines) + "\n"
    payload = {
        "command": command,
        "columns": list(columns),
        "rows": [{c: _native(row.get(c)) for c in columns} for row in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write_text(path, text: str):
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _probe_state(theta: float) -> ProbeState:
    return ProbeState(theta=theta)


def _probe_bloch_vector(probe: ProbeState) -> np.ndarray:
    return bloch_from_density(density_from_ket(ket_from_probe(probe)))


def run_discriminate(cfg: ExperimentConfig):
    """Rows for the ``discriminate`` subcommand."""
    cold, hot = BathSpec(cfg.nbar_cold), BathSpec(cfg.nbar_hot)
    taus = cfg.taus()
    noise = NoiseModel(cfg.noise_sigma)
    rows = []
    for pi, theta in enumerate(cfg.probe_thetas):
        probe = _probe_state(theta)
        r0 = _probe_bloch_vector(probe)
        points = discrimination_curve(probe, cold, hot, taus)
        for ti, pt in enumerate(points):
            row = {
                "row_type": "grid" if pt.g is not None else "degenerate",
                "probe_theta": theta,
                "tau": pt.tau,
                "ev_cold": pt.ev_cold,
                "ev_hot": pt.ev_hot,
                "separation": pt.separation,
            }
            if pt.g is not None and cfg.mc_samples >= 2:
                for slot, bath in enumerate((cold, hot)):
                    rho = density_from_bloch(
                        lindblad_closed_form(r0, bath, pt.tau))
                    seed = derive_seed(cfg.master_seed, pi, ti, slot)
                    mean, std = monte_carlo_errors(
                        rho, noise, cfg.mc_samples, "expectation",
                        master_seed=seed, observable=pt.g)
                    label = "cold" if slot == 0 else "hot"
                    row["mc_ev_%s_mean" % label] = mean
                    row["mc_ev_%s_std" % label] = std
            rows.append(row)
        tau_star, sep_max = optimal_time(probe, cold, hot)
        rows.append({
            "row_type": "optimum",
            "probe_theta": theta,
            "tau_star": tau_star,
            "separation_max": sep_max,
        })
    return DISCRIMINATE_COLUMNS, rows


def run_free_energy(cfg: ExperimentConfig):
    """Rows for the ``free-energy`` subcommand."""
    taus = cfg.taus()
    h = Hamiltonian(omega=cfg.omega)
    rows = []
    for theta in cfg.probe_thetas:
        probe = _probe_state(theta)
        rho_in = density_from_ket(ket_from_probe(probe))
        r0 = _probe_bloch_vector(probe)
        for bath in (BathSpec(cfg.nbar_cold), BathSpec(cfg.nbar_hot)):
            temperature = temperature_from_occupation(bath)
            rho_late = density_from_bloch(
                lindblad_closed_form(r0, bath, THERMALIZATION_TAU))
            _, _, df_inf = free_energy_change(rho_in, rho_late, temperature, h)
            for rec in free_energy_trajectory(probe, bath, taus, h):
                rows.append({
                    "row_type": "grid",
                    "probe_theta": theta,
                    "nbar": bath.nbar,
                    "temperature": rec.temperature,
                    "tau": rec.tau,
                    "dU": rec.dU,
                    "dS": rec.dS,
                    "dF": rec.dF,
                    "dF_normalized": rec.dF_normalized,
                    "dF_inf": df_inf,
                })
    return FREE_ENERGY_COLUMNS, rows


def run_calibration(cfg: ExperimentConfig):
    """Rows for the ``calibration`` subcommand."""
    cold, hot = BathSpec(cfg.nbar_cold), BathSpec(cfg.nbar_hot)
    rows = []
    for phi in np.linspace(*CALIBRATION_PHI_GRID):
        phi = float(phi)
        rows.append({
            "table": "tau_vs_phi",
            "row_type": "grid",
            "phi": phi,
            "tau_cold": tau_from_phase(phi, cold),
            "tau_hot": tau_from_phase(phi, hot),
        })
    for p in np.linspace(*CALIBRATION_P_GRID):
        p = float(p)
        rows.append({
            "table": "temperature_vs_p",
            "row_type": "grid",
            "p": p,
            "temperature": temperature_from_p(p),
        })
    for bath in (cold, hot):
        p = params_from_bath(bath, 0.0).p
        temperature = temperature_from_p(p)
        rows.append({
            "table": "temperature_vs_p",
            "row_type": "marked",
            "p": p,
            "temperature": temperature,
            "nbar_recovered": occupation_from_temperature(temperature),
        })
    return CALIBRATION_COLUMNS, rows


def run_simulate(cfg: ExperimentConfig, dump_dir=None):
    """Rows plus a summary report for ``simulate-experiment``.

    Returns ``(columns, rows, report_dict, n_errors)``.  Per-row failures
    are recorded as rows with ``status = "error"`` rather than aborting
    the sweep.
    """
    cold, hot = BathSpec(cfg.nbar_cold), BathSpec(cfg.nbar_hot)
    taus = cfg.taus()
    noise = NoiseModel(cfg.noise_sigma)
    n_draw = max(cfg.mc_samples, 1)
    want_mc = cfg.mc_samples >= 2
    if dump_dir is not None:
        os.makedirs(dump_dir, exist_ok=True)
    rows = []
    n_errors = 0
    fidelities = []
    for pi, theta in enumerate(cfg.probe_thetas):
        probe = _probe_state(theta)
        rho_in = density_from_ket(ket_from_probe(probe))
        r0 = _probe_bloch_vector(probe)
        for bi, bath in enumerate((cold, hot)):
            p_mix = params_from_bath(bath, 0.0).p
            for ti, tau in enumerate(taus):
                tau = float(tau)
                base = derive_seed(cfg.master_seed, pi, bi, ti)
                row = {
                    "status": "ok",
                    "probe_theta": theta,
                    "nbar": bath.nbar,
                    "tau": tau,
                    "seed_base": base,
                }
                try:
                    phi = phi_from_tau(tau, bath)
                    r_theory = lindblad_closed_form(r0, bath, tau)
                    rho_b = simulate_kraus_pair(rho_in, phi, PairSelector.PAIR_B)
                    rho_a = simulate_kraus_pair(rho_in, phi, PairSelector.PAIR_A)
                    ideal_b = ideal_intensities(rho_b)
                    ideal_a = ideal_intensities(rho_a)
                    seeds_b = [derive_seed(base, i, 0) for i in range(n_draw)]
                    seeds_a = [derive_seed(base, i, 1) for i in range(n_draw)]
                    block_b = noisy_intensity_block(ideal_b, noise, seeds_b)
                    block_a = noisy_intensity_block(ideal_a, noise, seeds_a)
                    bloch_b = stokes_bloch(block_b)
                    bloch_a = stokes_bloch(block_a)
                    combined = p_mix * bloch_b + (1.0 - p_mix) * bloch_a
                    fids = functional_values(combined, KIND_FIDELITY, r_theory)
                    row.update({
                        "phi": phi,
                        "rx_theory": float(r_theory[0]),
                        "ry_theory": float(r_theory[1]),
                        "rz_theory": float(r_theory[2]),
                        "rx_est": float(combined[0, 0]),
                        "ry_est": float(combined[0, 1]),
                        "rz_est": float(combined[0, 2]),
                        "fidelity_est": float(fids[0]),
                    })
                    if want_mc:
                        row.update({
                            "mc_fidelity_mean": float(np.mean(fids)),
                            "mc_fidelity_std": float(np.std(fids, ddof=1)),
                        })
                        for j, axis in enumerate(("rx", "ry", "rz")):
                            row["mc_%s_mean" % axis] = float(np.mean(combined[:, j]))
                            row["mc_%s_std" % axis] = float(np.std(combined[:, j], ddof=1))
                    fidelities.append(float(fids[0]))
                    if dump_dir is not None:
                        for selector, block, seeds in (
                                (PairSelector.PAIR_B, block_b, seeds_b),
                                (PairSelector.PAIR_A, block_a, seeds_a)):
                            ds = TomographyDataset(
                                intensities=tuple(block[0]),
                                noise_sigma=cfg.noise_sigma,
                                seed=seeds[0])
                            name = "row%05d_%s.csv" % (
                                len(rows), selector.value)
                            dataset_to_csv(ds, os.path.join(dump_dir, name))
                except QubithermError as exc:
                    n_errors += 1
                    row = {
                        "status": "error",
                        "probe_theta": theta,
                        "nbar": bath.nbar,
                        "tau": tau,
                        "seed_base": base,
                        "message": str(exc),
                    }
                rows.append(row)
    summary = {
        "rows": len(rows),
        "errors": n_errors,
        "fidelity_mean": float(np.mean(fidelities)) if fidelities else None,
        "fidelity_min": float(min(fidelities)) if fidelities else None,
    }
    report = {
        "command": "simulate-experiment",
        "version": __version__,
        "kernel_backend": backend_name(),
        "config": cfg.as_dict(),
        "seed_rule": SEED_RULE,
        "summary": summary,
    }
    return SIMULATE_COLUMNS, rows, report, n_errors


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitherm",
        description="Qubit thermometry simulator: bath discrimination, "
                    "free-energy tracking, optical calibration and a full "
                    "simulated tomography pipeline.")
    parser.add_argument(
        "--version", action="version", version="qubitherm " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("discriminate", "optimal-observable curves with error bars"),
        ("free-energy", "dU/dS/dF records along the time grid"),
        ("calibration", "phase-to-time and weight-to-temperature tables"),
        ("simulate-experiment", "full optical pipeline vs closed form"),
    )
    for name, help_text in specs:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", metavar="PATH",
                        help="JSON config file (defaults used when omitted)")
        sp.add_argument("--out", metavar="PATH",
                        help="output file (stdout when omitted)")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the master seed")
        sp.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv)")
        if name == "simulate-experiment":
            sp.add_argument("--dump-datasets", metavar="DIR", default=None,
                            help="write the point-estimate tomography "
                                 "datasets, one CSV per row and pair")
            sp.add_argument("--report", metavar="PATH", default=None,
                            help="summary report path (defaults to "
                                 "OUT.report.json when --out is given)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2

    try:
        cfg = load_config(args.config) if args.config else ExperimentConfig()
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            cfg = replace(cfg, master_seed=args.seed)
    except ConfigError as exc:
        print("config error: %s" % (exc,), file=sys.stderr)
        return 2

    n_errors = 0
    try:
        if args.command == "discriminate":
            columns, rows = run_discriminate(cfg)
        elif args.command == "free-energy":
            columns, rows = run_free_energy(cfg)
        elif args.command == "calibration":
            columns, rows = run_calibration(cfg)
        else:
            columns, rows, report, n_errors = run_simulate(
                cfg, dump_dir=args.dump_datasets)
            report_path = args.report
            if report_path is None and args.out is not None:
                report_path = args.out + ".report.json"
            if report_path is not None:
                _write_text(report_path,
                            json.dumps(report, indent=2, sort_keys=True) + "\n")
        _write_text(args.out, render_table(args.command, columns, rows,
                                           args.format))
    except QubithermError as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 3
    except OSError as exc:
        print("error: %s" % (exc,), file=sys.stderr)
        return 3
    return 3 if n_errors else 0


if __name__ == "__main__":
    raise SystemExit(main())
