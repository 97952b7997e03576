"""Command-line front end: config parsing, run orchestration, data emission.

Subcommands: comb, analytic, simulate, multimode, capacity, reproduce.
Configs are flat ``key = value`` text files with ``#`` comments; frequency
inputs are in plain Hz and converted to angular units internally.  All
outputs are written atomically; every CSV carries a self-describing
header (units embedded in the column names).  Exit codes: 0 success,
1 numerical failure, 2 configuration error.

The environment variable AFC_THREADS caps the number of worker processes
used for independent sweep points; results are assembled in a fixed order
so identical configs give byte-identical outputs regardless of the
worker count.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import reports
from .analytic import (efficiency_backward, efficiency_forward,
                       figure2_curves, figure3_curves, optimal_finesse,
                       output_phase)
from .capacity import PlanningError, plan_memory, preset
from .comb import (FWHM_SIGMA, CombConfigError, CombParams, comb_density,
                   comb_ft, effective_depth)
from .multimode import CapacityError, make_mode_train, run_mode_train
from .solver import (SimConfig, SolverError, convergence_study,
                     default_input, forward_echo, gaussian_pulse,
                     simulate_storage)

TWO_PI = 2.0 * math.pi


class ConfigError(Exception):
    """Invalid or missing configuration; reported with exit code 2."""


# --------------------------------------------------------------------------
# Config files


REQUIRED = object()

# key -> (type tag, default); type tags: float, int, str, bool.
COMB_SCHEMA = {
    "delta_hz": (float, REQUIRED),
    "big_gamma_hz": (float, REQUIRED),
    "gamma_fwhm_hz": (float, None),
    "finesse": (float, None),
    "delta0_hz": (float, 0.0),
    "d": (float, 0.0),
    "envelope": (str, "gaussian"),
}

SIMULATE_SCHEMA = {
    **COMB_SCHEMA,
    "retrieval": (str, "backward"),
    "pulse_fwhm_hz": (float, None),
    "samples_per_fwhm": (int, 24),
    "nz": (int, 128),
    "nodes_per_peak": (int, 7),
    "peak_cutoff": (float, 1e-3),
    "flip_time_s": (float, None),
    "t_end_s": (float, None),
    "echo_window_s": (float, None),
    "spin_loss": (float, 1.0),
    "storage_time_s": (float, 0.0),
    "convergence_check": (bool, False),
}

MULTIMODE_SCHEMA = {
    **COMB_SCHEMA,
    "n_modes": (int, REQUIRED),
    "dead_time_s": (float, 0.0),
    "samples_per_fwhm": (int, 24),
    "nz": (int, 128),
    "nodes_per_peak": (int, 7),
    "peak_cutoff": (float, 1e-3),
    "spin_loss": (float, 1.0),
}


def _coerce(key: str, raw: str, kind, lineno: int, path):
    if raw.lower() == "none":
        return None
    try:
        if kind is float:
            return float(raw)
        if kind is int:
            return int(raw)
        if kind is bool:
            if raw.lower() in ("true", "yes", "1", "on"):
                return True
            if raw.lower() in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        return raw
    except ValueError:
        raise ConfigError(
            f"{path}:{lineno}: cannot parse {key} = {raw!r} as "
            f"{kind.__name__}") from None


def load_config(path, schema: dict) -> dict:
    """Parse a flat key = value file against a schema.

    Unknown keys and missing required keys are rejected with the file and
    line in the diagnostic.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', "
                              f"got {line.strip()!r}")
        key, raw = (s.strip() for s in text.split("=", 1))
        if key not in schema:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = _coerce(key, raw, schema[key][0], lineno, path)
    for key, (_, default) in schema.items():
        if key not in values:
            if default is REQUIRED:
                raise ConfigError(f"{path}: missing required key {key!r}")
            values[key] = default
    return values


def comb_from_config(cfg: dict, path="config") -> CombParams:
    """Build CombParams from Hz-based config values."""
    if (cfg["gamma_fwhm_hz"] is None) == (cfg["finesse"] is None):
        raise ConfigError(
            f"{path}: set exactly one of gamma_fwhm_hz and finesse")
    try:
        common = dict(delta=TWO_PI * cfg["delta_hz"],
                      big_gamma=TWO_PI * cfg["big_gamma_hz"],
                      delta0=TWO_PI * cfg["delta0_hz"],
                      peak_depth=cfg["d"], envelope=cfg["envelope"])
        if cfg["finesse"] is not None:
            return CombParams.from_finesse(finesse=cfg["finesse"], **common)
        gamma_tilde = TWO_PI * cfg["gamma_fwhm_hz"] / FWHM_SIGMA
        return CombParams(gamma_tilde=gamma_tilde, **common)
    except CombConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# Shared helpers


def _resample(env, t: np.ndarray) -> np.ndarray:
    """Envelope samples on an arbitrary time grid (zero outside)."""
    to = env.times
    re = np.interp(t, to, env.samples.real, left=0.0, right=0.0)
    im = np.interp(t, to, env.samples.imag, left=0.0, right=0.0)
    return re + 1j * im


def _phase_or_zero(z: np.ndarray) -> np.ndarray:
    out = np.angle(z)
    out[np.abs(z) < 1e-12 * max(np.abs(z).max(), 1e-300)] = 0.0
    return out


def _worker_count() -> int:
    raw = os.environ.get("AFC_THREADS", "")
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ConfigError(f"AFC_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise ConfigError("AFC_THREADS must be >= 1")
        return n
    return min(4, os.cpu_count() or 1)


def _sweep(func, points: list, workers: int) -> list:
    """Run independent sweep points, preserving input order."""
    if workers <= 1 or len(points) <= 1:
        return [func(p) for p in points]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(func, points))


# --------------------------------------------------------------------------
# comb


def cmd_comb(args) -> int:
    cfg = load_config(args.params, COMB_SCHEMA)
    params = comb_from_config(cfg, args.params)
    out = Path(args.out)

    if args.band_hz is not None:
        half = math.pi * args.band_hz  # full band in Hz -> rad/s half-width
    elif params.envelope == "gaussian":
        half = 4.0 * params.big_gamma
    else:
        half = 0.75 * params.big_gamma
    center = params.delta0
    detunings = np.linspace(center - half, center + half, args.points)
    density = comb_density(detunings, params)
    reports.write_csv(out / "comb.csv", ["delta_hz", "density"],
                      zip(detunings / TWO_PI, density))

    period = TWO_PI / params.delta
    if args.ft:
        t = np.linspace(0.0, 2.5 * period, args.points)
        ft = comb_ft(t, params)
        reports.write_csv(out / "comb_ft.csv",
                          ["t_s", "re", "im", "abs"],
                          zip(t, ft.real, ft.imag, np.abs(ft)))

    fig, axes = reports.new_figure(nrows=2 if args.ft else 1,
                                   figsize=(7.0, 5.5 if args.ft else 3.2))
    ax0 = axes[0] if args.ft else axes
    ax0.plot(detunings / TWO_PI / 1e3, density, lw=0.8)
    ax0.set_xlabel("detuning (kHz)")
    ax0.set_ylabel("spectral density n")
    ax0.set_title(f"comb: F = {params.finesse:.2f}, "
                  f"d = {params.peak_depth:g}")
    if args.ft:
        axes[1].plot(t * 1e6, np.abs(ft), lw=0.9)
        axes[1].set_xlabel("time (us)")
        axes[1].set_ylabel("|FT of density|")
    reports.save_figure(fig, out / "comb.png")
    print(f"wrote {out / 'comb.csv'}"
          + (f", {out / 'comb_ft.csv'}" if args.ft else "")
          + f", {out / 'comb.png'}")
    return 0


# --------------------------------------------------------------------------
# analytic


def _write_figure2(out: Path, depths: np.ndarray,
                   numeric_rows=None) -> None:
    finesses = (4.0, 6.0, 10.0)
    curves = figure2_curves(depths, finesses)
    header = ["d"] + [f"eta_F{int(F)}" for F in finesses]
    reports.write_csv(out / "figure2_curves.csv", header,
                      zip(depths, *(curves[F] for F in finesses)))
    fig, ax = reports.new_figure(figsize=(6.4, 4.2))
    for F in finesses:
        ax.plot(depths, curves[F], label=f"F = {int(F)}")
    if numeric_rows:
        for F in finesses:
            pts = [(r[0], r[2]) for r in numeric_rows if r[1] == F]
            if pts:
                ax.plot(*zip(*pts), "o", ms=5, mfc="none",
                        color=ax.lines[list(finesses).index(F)].get_color())
    ax.set_xlabel("peak optical depth d")
    ax.set_ylabel("backward-retrieval efficiency")
    ax.set_ylim(0.0, 1.0)
    ax.legend()
    reports.save_figure(fig, out / "figure2.png")


def _write_figure3(out: Path, finesses: np.ndarray) -> None:
    depths = (5.0, 10.0, 20.0, 40.0)
    curves = figure3_curves(finesses, depths)
    header = ["finesse"] + [f"eta_d{int(d)}" for d in depths]
    reports.write_csv(out / "figure3.csv", header,
                      zip(finesses, *(curves[d] for d in depths)))
    fig, ax = reports.new_figure(figsize=(6.4, 4.2))
    for d in depths:
        ax.plot(finesses, curves[d], label=f"d = {int(d)}")
    ax.set_xlabel("comb finesse F")
    ax.set_ylabel("backward-retrieval efficiency")
    ax.set_ylim(0.0, 1.0)
    ax.legend()
    reports.save_figure(fig, out / "figure3.png")


def cmd_analytic(args) -> int:
    if args.figure is None:
        if args.d is None or args.finesse is None:
            raise ConfigError("analytic needs either --figure 2|3 or "
                              "both --d and --finesse")
        d, F = args.d, args.finesse
        loss = args.spin_loss ** 2
        eta = efficiency_backward(d, F) * loss
        d_tilde = effective_depth(d, F)
        print(f"eta = {eta:.3f}")
        print(f"eta_backward = {eta:.6f}")
        print(f"eta_forward = {efficiency_forward(d_tilde) * loss:.6f}")
        print(f"d_tilde = {d_tilde:.6f}")
        F_opt, eta_opt = optimal_finesse(d)
        print(f"optimal_finesse = {F_opt:.3f} (eta {eta_opt * loss:.6f})")
        return 0

    out = Path(args.out)
    if args.figure == "2":
        _write_figure2(out, np.arange(0.0, 50.0 + 1e-9, 0.5))
        print(f"wrote {out / 'figure2_curves.csv'}, {out / 'figure2.png'}")
    else:
        _write_figure3(out, np.arange(1.05, 30.0 + 1e-9, 0.25))
        print(f"wrote {out / 'figure3.csv'}, {out / 'figure3.png'}")
    return 0


# --------------------------------------------------------------------------
# simulate


def _build_input(params: CombParams, cfg: dict):
    if cfg["pulse_fwhm_hz"] is not None:
        gamma_p = TWO_PI * cfg["pulse_fwhm_hz"]
        fwhm_t = 8.0 * math.log(2.0) / gamma_p
        dt = fwhm_t / cfg["samples_per_fwhm"]
        n = int(math.ceil(6.0 * fwhm_t / dt)) + 1
        return gaussian_pulse(-3.0 * fwhm_t, dt, n, 0.0, fwhm_t)
    return default_input(params, samples_per_fwhm=cfg["samples_per_fwhm"])


def cmd_simulate(args) -> int:
    cfg = load_config(args.config, SIMULATE_SCHEMA)
    params = comb_from_config(cfg, args.config)
    if params.peak_depth <= 0:
        raise ConfigError(f"{args.config}: simulate needs d > 0")
    if cfg["retrieval"] not in ("backward", "forward"):
        raise ConfigError(f"{args.config}: retrieval must be backward or "
                          f"forward, got {cfg['retrieval']!r}")
    if cfg["retrieval"] == "forward" and cfg["flip_time_s"] is not None:
        raise ConfigError(f"{args.config}: forward retrieval takes no "
                          "flip_time_s")
    out = Path(args.out)

    inp = _build_input(params, cfg)
    sim_cfg = SimConfig(nz=cfg["nz"], flip_time=cfg["flip_time_s"],
                        t_end=cfg["t_end_s"],
                        echo_window=cfg["echo_window_s"],
                        spin_loss=cfg["spin_loss"],
                        T_s=cfg["storage_time_s"],
                        nodes_per_peak=cfg["nodes_per_peak"],
                        peak_cutoff=cfg["peak_cutoff"])
    if cfg["retrieval"] == "backward":
        result = simulate_storage(params, inp, sim_cfg)
        eta_analytic = efficiency_backward(params.peak_depth, params.finesse) \
            * cfg["spin_loss"] ** 2
    else:
        result = forward_echo(params, inp, sim_cfg)
        eta_analytic = efficiency_forward(
            effective_depth(params.peak_depth, params.finesse),
            params.finesse)

    convergence = None
    if cfg["convergence_check"]:
        from dataclasses import replace
        report = convergence_study(params, inp,
                                   replace(sim_cfg, convergence_check=True))
        convergence = {"eta_base": report.eta_base,
                       "eta_refined": report.eta_refined,
                       "delta_eta": report.delta_eta,
                       "converged": report.converged,
                       "failing_axis": report.failing_axis}

    period = TWO_PI / params.delta
    payload = {
        "eta": result.eta,
        "eta_analytic": eta_analytic,
        "output_phase_rad": result.output_phase,
        "output_phase_predicted_rad": output_phase(params.delta0,
                                                   params.delta),
        "echo_delay_s": result.echo_peak_time,
        "rephasing_period_s": period,
        "storage_time_s": cfg["storage_time_s"],
        "energy_balance_residual": result.energy_balance_residual,
        "d_tilde": effective_depth(params.peak_depth, params.finesse),
        "finesse": params.finesse,
        "retrieval": cfg["retrieval"],
        "in_regime": result.in_regime,
        "flags": result.flags,
    }
    if convergence is not None:
        payload["convergence"] = convergence
    reports.write_json(out / "result.json", payload)

    t_lo = inp.t0
    t_hi = result.output_field.times[-1]
    t = np.arange(t_lo, t_hi + 0.5 * inp.dt, inp.dt)
    e_in = _resample(inp, t)
    e_trans = _resample(result.transmitted_field, t)
    e_out = _resample(result.output_field, t)
    reports.write_csv(
        out / "fields.csv",
        ["t_s", "abs_e_in", "phase_in_rad", "abs_e_trans",
         "phase_trans_rad", "abs_e_out", "phase_out_rad"],
        zip(t, np.abs(e_in), _phase_or_zero(e_in), np.abs(e_trans),
            _phase_or_zero(e_trans), np.abs(e_out), _phase_or_zero(e_out)))

    fig, ax = reports.new_figure(figsize=(7.2, 4.0))
    ax.plot(t * 1e6, np.abs(e_in), label="input", lw=1.0)
    ax.plot(t * 1e6, np.abs(e_trans), label="transmitted", lw=1.0)
    ax.plot(t * 1e6, np.abs(e_out), label="retrieved", lw=1.0)
    ax.set_xlabel("time (us)")
    ax.set_ylabel("|E|")
    ax.set_title(f"eta = {result.eta:.4f} (analytic {eta_analytic:.4f})")
    ax.legend()
    reports.save_figure(fig, out / "fields.png")
    print(f"eta = {result.eta:.4f}")
    print(f"wrote {out / 'result.json'}, {out / 'fields.csv'}, "
          f"{out / 'fields.png'}")
    return 0


# --------------------------------------------------------------------------
# multimode


def _run_multimode(params: CombParams, cfg: dict, out: Path) -> dict:
    train = make_mode_train(cfg["n_modes"], params.big_gamma, params.delta,
                            T0=cfg["dead_time_s"])
    sim_cfg = SimConfig(nz=cfg["nz"], spin_loss=cfg["spin_loss"],
                        nodes_per_peak=cfg["nodes_per_peak"],
                        peak_cutoff=cfg["peak_cutoff"])
    result, report = run_mode_train(params, train, sim_cfg,
                                    samples_per_fwhm=cfg["samples_per_fwhm"])

    reports.write_csv(
        out / "modes.csv",
        ["k", "eta_k", "centroid_in_s", "centroid_out_s"],
        zip(range(train.n_modes), report.per_mode_eta,
            report.centroids_in, report.centroids_out))
    rows = [(k, j, abs(report.overlap_matrix[k, j]) ** 2)
            for k in range(train.n_modes) for j in range(train.n_modes)]
    reports.write_csv(out / "crosstalk.csv", ["k", "j", "overlap_sq"], rows)

    summary = {
        "n_modes": train.n_modes,
        "slot_s": train.slot,
        "mode_fwhm_s": train.fwhm,
        "rephasing_period_s": TWO_PI / params.delta,
        "eta_mean": float(report.per_mode_eta.mean()),
        "eta_std": report.uniformity_std,
        "max_crosstalk": report.max_crosstalk,
        "total_eta": result.eta,
        "energy_balance_residual": result.energy_balance_residual,
        "fifo_order": bool(np.all(np.diff(report.centroids_out) > 0)),
        "in_regime": result.in_regime,
        "flags": result.flags,
    }

    t = result.output_field.times
    fig, (ax0, ax1) = reports.new_figure(nrows=2, figsize=(7.2, 5.4))
    n = t.size
    env_in = train.envelope(result.output_field.t0 - TWO_PI / params.delta,
                            result.output_field.dt, n)
    ax0.plot((env_in.times) * 1e6, np.abs(env_in.samples),
             lw=0.9, label="input train")
    ax0.plot(t * 1e6, np.abs(result.output_field.samples), lw=0.9,
             label="retrieved train")
    ax0.set_xlabel("time (us)")
    ax0.set_ylabel("|E|")
    ax0.legend()
    ax1.plot(range(train.n_modes), report.per_mode_eta, "o-")
    ax1.set_xlabel("mode index k")
    ax1.set_ylabel("eta_k")
    ax1.set_ylim(0.0, 1.0)
    reports.save_figure(fig, out / "modes.png")
    return summary


def cmd_multimode(args) -> int:
    cfg = load_config(args.config, MULTIMODE_SCHEMA)
    params = comb_from_config(cfg, args.config)
    if params.peak_depth <= 0:
        raise ConfigError(f"{args.config}: multimode needs d > 0")
    out = Path(args.out)
    try:
        summary = _run_multimode(params, cfg, out)
    except CapacityError as exc:
        raise ConfigError(f"{args.config}: {exc}") from exc
    reports.write_json(out / "result.json", summary)
    print(f"eta_mean = {summary['eta_mean']:.4f} "
          f"(std {summary['eta_std']:.1e}, "
          f"{summary['n_modes']} modes)")
    print(f"wrote {out / 'modes.csv'}, {out / 'crosstalk.csv'}, "
          f"{out / 'result.json'}, {out / 'modes.png'}")
    return 0


# --------------------------------------------------------------------------
# capacity


def cmd_capacity(args) -> int:
    try:
        mat = preset(args.material)
    except PlanningError as exc:
        raise ConfigError(str(exc)) from exc
    if args.d is not None:
        from dataclasses import replace
        mat = replace(mat, d_available=args.d)
    gamma_hz = args.gamma_khz * 1e3 if args.gamma_khz is not None else None
    report = plan_memory(mat, target_eta=args.target_eta,
                         gamma_hz=gamma_hz, finesse=args.finesse,
                         T0=args.dead_time_us * 1e-6)
    payload = report.as_dict()
    print(json.dumps(payload, indent=2, sort_keys=True))
    rows = [
        ("material", report.material),
        ("peak width gamma", f"{report.peak_width_hz:.6g} Hz"),
        ("peak separation", f"{report.peak_sep_hz:.6g} Hz"),
        ("finesse", f"{report.finesse:.4g}"),
        ("peaks N_p", str(report.n_peaks)),
        ("mode slot tau", f"{report.tau_s * 1e6:.6g} us"),
        ("train duration", f"{report.T_s * 1e6:.6g} us"),
        ("modes N", str(report.n_modes)),
        ("predicted eta", f"{report.eta_pred:.4f}"),
        ("CRIB-equivalent d", f"{report.d_crib_equiv:.6g}"),
        ("out of regime", str(report.out_of_regime)),
    ]
    width = max(len(r[0]) for r in rows)
    print()
    for name, value in rows:
        print(f"  {name:<{width}}  {value}")

    if args.out is not None:
        out = Path(args.out)
        reports.write_json(out / "capacity.json", payload)
        F = np.linspace(1.05, 30.0, 400)
        eta = [efficiency_backward(mat.d_available, f) for f in F]
        fig, ax = reports.new_figure(figsize=(6.4, 4.0))
        ax.plot(F, eta, lw=1.0)
        ax.plot([report.finesse], [report.eta_pred], "o")
        ax.set_xlabel("comb finesse F")
        ax.set_ylabel("backward-retrieval efficiency")
        ax.set_title(f"{report.material}: d = {mat.d_available:g}")
        reports.save_figure(fig, out / "capacity.png")
        print(f"\nwrote {out / 'capacity.json'}, {out / 'capacity.png'}")
    return 0


# --------------------------------------------------------------------------
# reproduce


def _figure2_point(point):
    """One numeric symbol for the depth-sweep figure (d, F) -> efficiency."""
    d, F = point
    delta = TWO_PI * 100e3
    params = CombParams.from_finesse(delta=delta, finesse=F,
                                     big_gamma=30.0 * delta, peak_depth=d)
    inp = default_input(params)
    result = simulate_storage(params, inp, SimConfig())
    return d, F, result.eta, efficiency_backward(d, F)


def reproduce_figure2(out: Path, analytic_only: bool) -> None:
    depths = np.arange(0.0, 50.0 + 1e-9, 0.5)
    numeric_rows = None
    if not analytic_only:
        points = [(d, F) for F in (4.0, 6.0, 10.0)
                  for d in (5.0, 10.0, 20.0, 40.0)]
        rows = _sweep(_figure2_point, points, _worker_count())
        numeric_rows = [(d, F, eta, ana) for d, F, eta, ana in rows]
        reports.write_csv(
            out / "figure2_numeric.csv",
            ["d", "finesse", "eta_numeric", "eta_analytic", "abs_diff"],
            [(d, F, eta, ana, abs(eta - ana))
             for d, F, eta, ana in numeric_rows])
    _write_figure2(out, depths, numeric_rows)
    files = [out / "figure2_curves.csv", out / "figure2.png"]
    if not analytic_only:
        files.insert(1, out / "figure2_numeric.csv")
    print("wrote " + ", ".join(str(f) for f in files))


def reproduce_figure3(out: Path) -> None:
    _write_figure3(out, np.arange(1.05, 30.0 + 1e-9, 0.25))
    print(f"wrote {out / 'figure3.csv'}, {out / 'figure3.png'}")


def reproduce_eu_example(out: Path, full: bool) -> None:
    # Full-scale capacity numbers for the europium preset.
    report = plan_memory(preset("eu_yso"), gamma_hz=2e3, finesse=10.0)
    reports.write_json(out / "capacity.json", report.as_dict())

    # Desk-scale analogue: same finesse and depth, envelope and separation
    # scaled to keep the run short (60 peaks, 10 modes).
    scaled = {**{k: d for k, (_, d) in MULTIMODE_SCHEMA.items()
                 if d is not REQUIRED},
              "n_modes": 10}
    params = CombParams.from_finesse(delta=TWO_PI * 20e3, finesse=10.0,
                                     big_gamma=TWO_PI * 1.2e6,
                                     peak_depth=40.0)
    summary = _run_multimode(params, scaled, out)
    summary["capacity_full_scale"] = report.as_dict()

    if full:
        # Full-scale 100-mode run; several minutes, not part of any gate.
        full_dir = out / "full_scale"
        full_params = CombParams.from_finesse(delta=TWO_PI * 20e3,
                                              finesse=10.0,
                                              big_gamma=TWO_PI * 12e6,
                                              peak_depth=40.0)
        full_cfg = dict(scaled)
        full_cfg["n_modes"] = 100
        full_summary = _run_multimode(full_params, full_cfg, full_dir)
        summary["full_scale_run"] = full_summary
    reports.write_json(out / "result.json", summary)
    print(f"eta_mean = {summary['eta_mean']:.4f} "
          f"(std {summary['eta_std']:.1e}, {summary['n_modes']} modes); "
          f"full-scale capacity: N_p = {report.n_peaks}, "
          f"N = {report.n_modes}")
    print(f"wrote {out / 'capacity.json'}, {out / 'modes.csv'}, "
          f"{out / 'crosstalk.csv'}, {out / 'result.json'}, "
          f"{out / 'modes.png'}")


def cmd_reproduce(args) -> int:
    out = Path(args.out)
    if args.target == "figure2":
        reproduce_figure2(out, args.analytic_only)
    elif args.target == "figure3":
        reproduce_figure3(out)
    else:
        reproduce_eu_example(out, args.full)
    return 0


# --------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afc",
        description="Atomic-frequency-comb memory: analytic model, "
                    "storage solver, multimode analysis, capacity planning.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("comb", help="evaluate a comb spectral density")
    p.add_argument("--params", required=True, help="key = value config file")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--emit", choices=["csv"], default="csv")
    p.add_argument("--ft", action="store_true",
                   help="also emit the temporal response (Fourier transform)")
    p.add_argument("--band-hz", type=float, default=None,
                   help="full sampling band in Hz (default: envelope span)")
    p.add_argument("--points", type=int, default=2001)
    p.set_defaults(func=cmd_comb)

    p = sub.add_parser("analytic", help="closed-form efficiency model")
    p.add_argument("--d", type=float, default=None, help="peak optical depth")
    p.add_argument("--finesse", type=float, default=None)
    p.add_argument("--spin-loss", type=float, default=1.0,
                   help="amplitude loss factor applied at storage")
    p.add_argument("--figure", choices=["2", "3"], default=None,
                   help="emit a full efficiency-curve dataset instead")
    p.add_argument("--emit", choices=["csv"], default="csv")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("simulate", help="one storage/retrieval run")
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("multimode", help="mode-train storage run")
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_multimode)

    p = sub.add_parser("capacity", help="material capacity planning")
    p.add_argument("--material", required=True,
                   help="preset name (eu_yso, pr_yso, tm_yag)")
    p.add_argument("--d", type=float, default=None,
                   help="override available peak depth")
    p.add_argument("--gamma-khz", type=float, default=None,
                   help="force the comb line width (kHz)")
    p.add_argument("--finesse", type=float, default=None,
                   help="force the finesse instead of optimizing")
    p.add_argument("--target-eta", type=float, default=None)
    p.add_argument("--dead-time-us", type=float, default=0.0,
                   help="control dead time subtracted from the train window")
    p.add_argument("--out", default=None,
                   help="also write capacity.json and capacity.png here")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("reproduce", help="regenerate reference datasets")
    p.add_argument("target", choices=["figure2", "figure3", "eu_example"])
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--analytic-only", action="store_true",
                   help="figure2: skip the numeric solver symbols")
    p.add_argument("--full", action="store_true",
                   help="eu_example: also run the long full-scale train")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, PlanningError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
