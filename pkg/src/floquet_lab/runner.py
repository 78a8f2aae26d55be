"""Experiment execution: dispatch a validated config, write outputs, return
a manifest with full provenance."""

from __future__ import annotations

import copy
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import serialize
from .config import ExperimentConfig, set_path, validate_config
from .dynamics import classify_growth, evolve, growth_fit, wiener_average
from .floquet import basis_state
from .spectral import (
    ScanConfig,
    default_theta_grid,
    level_spacing_stats,
    quasi_energies,
    singular_support_scan,
)
from .verify import fourier_agreement_grid, run_all_checks

DEFAULT_VERIFY_SEED = 20871


@dataclass
class RunManifest:
    """Provenance record of one run: config echo, timings, seeds, outputs."""

    experiment_type: str
    config_echo: dict
    out_dir: str
    wall_clock_s: float = 0.0
    seeds: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    verify_passed: bool | None = None
    summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "experiment_type": self.experiment_type,
            "config": self.config_echo,
            "out_dir": self.out_dir,
            "wall_clock_s": self.wall_clock_s,
            "seeds": self.seeds,
            "outputs": self.outputs,
            "verify_passed": self.verify_passed,
            "summary": self.summary,
        }


def _apply_seed_override(cfg: ExperimentConfig, seed: int) -> ExperimentConfig:
    raw = copy.deepcopy(cfg.raw)
    if raw.get("perturbation"):
        for k, entry in enumerate(raw["perturbation"]["profiles"]):
            entry["phase_seed"] = seed + k
    raw["experiment"].setdefault("params", {})["seed"] = seed
    return validate_config(raw)


def _run_spectrum(cfg: ExperimentConfig, out_dir: str):
    model = cfg.build_model()
    result = quasi_energies(model, dense_limit=cfg.params.get("dense_limit", 4096))
    stats = level_spacing_stats(result)
    csv_path = os.path.join(out_dir, "quasi_energies.csv")
    serialize.spectral_result_to_csv(result, csv_path)
    stats_path = os.path.join(out_dir, "spacing_stats.json")
    serialize.write_json_atomic(
        stats_path,
        {
            "mean_ratio": stats.mean_ratio,
            "spacings": [float(s) for s in stats.spacings],
            "ratios": [float(r) for r in stats.ratios],
        },
    )
    summary = {
        "mean_ratio": stats.mean_ratio,
        "max_residual": float(result.residuals.max()),
        "converged": bool(result.converged),
    }
    return [csv_path, stats_path], summary


def _run_evolve(cfg: ExperimentConfig, out_dir: str):
    model = cfg.build_model()
    steps = int(cfg.params.get("steps", 1000))
    record_every = int(cfg.params.get("record_every", 1))
    psi0 = basis_state(model.dim, int(cfg.params.get("initial_basis_index", 0)))
    record = evolve(model, psi0, steps=steps, record_every=record_every)
    csv_path = os.path.join(out_dir, "trajectory.csv")
    serialize.trajectory_to_csv(record, csv_path)

    summary = {
        "steps": steps,
        "renormalizations": record.renormalizations,
        "truncation_contaminated": bool(record.truncation_contaminated),
        "final_energy": float(record.energy[-1]),
    }
    window = cfg.params.get("fit_window", [100, 10000])
    in_window = (record.n >= window[0]) & (record.n <= window[1]) & (record.n > 0)
    if in_window.sum() >= 2:
        fit = growth_fit(record, window=tuple(window))
        summary["growth_exponent"] = fit.exponent
        summary["growth_r2"] = fit.r2
        summary["growth_label"] = classify_growth(fit, record.truncation_contaminated)
    if record_every == 1 and steps >= 1:
        summary["wiener_average"] = wiener_average(record.autocorr, steps)

    json_path = os.path.join(out_dir, "evolve_summary.json")
    serialize.write_json_atomic(json_path, summary)
    return [csv_path, json_path], summary


def _run_scan(cfg: ExperimentConfig, out_dir: str):
    model = cfg.build_model()
    scan_cfg = ScanConfig(
        theta_grid=default_theta_grid(int(cfg.params.get("theta_points", 512))),
        exponent_threshold=float(cfg.params.get("exponent_threshold", 0.5)),
        fit_rungs=int(cfg.params.get("fit_rungs", 4)),
        mass_floor=float(cfg.params.get("mass_floor", 1e-4)),
    )
    result = singular_support_scan(model, config=scan_cfg)
    csv_path = os.path.join(out_dir, "scan_g.csv")
    serialize.support_scan_to_csv(result, csv_path)
    summary = {
        "n_flagged": int(result.flagged.sum()),
        "flagged_thetas": [float(t) for t in result.flagged_thetas],
        "max_g_exponent": float(result.g_exponent.max()),
        "max_q_exponent": float(result.q_exponent.max()),
    }
    json_path = os.path.join(out_dir, "scan_summary.json")
    serialize.write_json_atomic(
        json_path,
        {
            **summary,
            "exponent_threshold": scan_cfg.exponent_threshold,
            "fit_rungs": scan_cfg.fit_rungs,
            "mass_floor": scan_cfg.mass_floor,
            "g_exponents": [float(p) for p in result.g_exponent],
            "q_exponents": [float(p) for p in result.q_exponent],
        },
    )
    return [csv_path, json_path], summary


def _run_verify(cfg: ExperimentConfig, out_dir: str):
    seed = int(cfg.params.get("seed", DEFAULT_VERIFY_SEED))
    rows = fourier_agreement_grid()
    reports = run_all_checks(seed=seed, fourier_rows=rows)
    json_path = os.path.join(out_dir, "verify_report.json")
    serialize.write_json_atomic(json_path, [r.to_dict() for r in reports])
    grid_path = os.path.join(out_dir, "fourier_grid.csv")
    serialize.write_csv_atomic(
        grid_path, ("omega", "kappa", "analytic", "numeric", "abs_err"), rows
    )
    passed = all(r.passed for r in reports)
    summary = {
        "checks": {r.name: bool(r.passed) for r in reports},
        "all_passed": bool(passed),
    }
    return [json_path, grid_path], summary, passed


def run(cfg: ExperimentConfig, out_dir: str | None = None, threads: int = 1,
        seed_override: int | None = None) -> RunManifest:
    """Execute one experiment (sweeps included) and write its manifest."""
    started = time.perf_counter()
    if seed_override is not None:
        cfg = _apply_seed_override(cfg, seed_override)
    out_dir = out_dir or cfg.output_directory
    os.makedirs(out_dir, exist_ok=True)

    manifest = RunManifest(
        experiment_type=cfg.experiment_type,
        config_echo=cfg.raw,
        out_dir=out_dir,
        seeds=cfg.seeds(),
    )
    if seed_override is not None:
        manifest.seeds["global_override"] = seed_override
    if cfg.perturbation_section is not None:
        manifest.summary["profile_classes"] = cfg.profile_classes()

    if cfg.experiment_type == "spectrum":
        outputs, summary = _run_spectrum(cfg, out_dir)
    elif cfg.experiment_type == "evolve":
        outputs, summary = _run_evolve(cfg, out_dir)
    elif cfg.experiment_type == "scan":
        outputs, summary = _run_scan(cfg, out_dir)
    elif cfg.experiment_type == "verify":
        outputs, summary, passed = _run_verify(cfg, out_dir)
        manifest.verify_passed = passed
    else:
        return _run_sweep(cfg, out_dir, threads, manifest, started)

    manifest.summary.update(summary)
    manifest.outputs = [os.path.relpath(p, out_dir) for p in outputs]
    _finalize(manifest, out_dir, started)
    return manifest


def sweep(cfg: ExperimentConfig, out_dir: str | None = None, threads: int = 1,
          seed_override: int | None = None) -> RunManifest:
    """Entry point for the sweep verb; requires a sweep-type config."""
    if cfg.experiment_type != "sweep":
        from .errors import ValidationError

        raise ValidationError("validation-error: sweep verb requires experiment.type sweep")
    return run(cfg, out_dir=out_dir, threads=threads, seed_override=seed_override)


def _sweep_value_config(cfg: ExperimentConfig, value) -> ExperimentConfig:
    raw = copy.deepcopy(cfg.raw)
    set_path(raw, cfg.axis.path, value)
    raw["experiment"] = copy.deepcopy(cfg.params["experiment"])
    raw["experiment"].setdefault("params", {})
    return validate_config(raw)


def _run_sweep(cfg: ExperimentConfig, out_dir: str, threads: int,
               manifest: RunManifest, started: float) -> RunManifest:
    values = cfg.axis.values

    def one(item):
        index, value = item
        sub_dir = os.path.join(out_dir, f"value_{index:03d}")
        sub_cfg = _sweep_value_config(cfg, value)
        return run(sub_cfg, out_dir=sub_dir)

    items = list(enumerate(values))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            sub_manifests = list(pool.map(one, items))
    else:
        sub_manifests = [one(item) for item in items]

    # one deterministic row per axis value: scalar summary fields + labels
    scalar_keys = sorted(
        {
            key
            for sub in sub_manifests
            for key, val in sub.summary.items()
            if isinstance(val, (int, float)) and not isinstance(val, bool)
        }
    )
    columns = ["index", "value", *scalar_keys, "summability", "labels"]
    rows = []
    for index, (value, sub) in enumerate(zip(values, sub_manifests)):
        row = [str(index), value]
        for key in scalar_keys:
            cell = sub.summary.get(key)
            row.append("" if cell is None else float(cell))
        row.append("|".join(sub.summary.get("profile_classes", [])))
        row.append(str(sub.summary.get("growth_label", "")))
        rows.append(row)
    sweep_csv = os.path.join(out_dir, "sweep.csv")
    serialize.write_csv_atomic(sweep_csv, columns, rows)

    manifest.outputs = [os.path.relpath(sweep_csv, out_dir)] + [
        os.path.relpath(os.path.join(sub.out_dir, "manifest.json"), out_dir)
        for sub in sub_manifests
    ]
    manifest.summary.update(
        {
            "axis_path": cfg.axis.path,
            "axis_values": values,
            "runs": [sub.summary for sub in sub_manifests],
        }
    )
    if any(sub.verify_passed is not None for sub in sub_manifests):
        manifest.verify_passed = all(
            sub.verify_passed for sub in sub_manifests if sub.verify_passed is not None
        )
    _finalize(manifest, out_dir, started)
    return manifest


def _finalize(manifest: RunManifest, out_dir: str, started: float):
    for rel in manifest.outputs:
        path = os.path.join(out_dir, rel)
        if not (os.path.exists(path) and os.path.getsize(path) > 0):
            raise RuntimeError(f"output {rel} missing or empty")
    manifest.wall_clock_s = time.perf_counter() - started
    serialize.write_json_atomic(os.path.join(out_dir, "manifest.json"), manifest.to_dict())
    manifest.outputs.append("manifest.json")
