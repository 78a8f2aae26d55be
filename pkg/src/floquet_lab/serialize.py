"""JSON and CSV output with fixed formatting and atomic writes.

Complex numbers are [re, im] pairs; CSV numbers carry 17 significant
digits so identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .dynamics import TrajectoryRecord
from .model import BaseHamiltonian, CoefficientProfile, RankNPerturbation
from .spectral import MeasureScan, SpectralResult, SupportScanResult

SCHEMA_LINE = "# floquet-lab schema v1"


def fmt(x) -> str:
    return f"{float(x):.17g}"


def complex_pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def pair_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def hamiltonian_to_dict(base: BaseHamiltonian) -> dict:
    return {
        "alpha": [float(a) for a in base.alpha],
        "period_T": float(base.period_T),
        "hbar": float(base.hbar),
    }


def hamiltonian_from_dict(d: dict) -> BaseHamiltonian:
    return BaseHamiltonian(
        alpha=np.asarray(d["alpha"], dtype=float),
        period_T=float(d["period_T"]),
        hbar=float(d["hbar"]),
    )


def profile_to_dict(profile: CoefficientProfile) -> dict:
    out = {"family": profile.family, "dim": profile.dim}
    if profile.gamma is not None:
        out["gamma"] = float(profile.gamma)
    if profile.rate is not None:
        out["rate"] = float(profile.rate)
    if profile.values is not None:
        out["values"] = [complex_pair(v) for v in profile.values]
    if profile.phase_seed is not None:
        out["phase_seed"] = int(profile.phase_seed)
    return out


def profile_from_dict(d: dict) -> CoefficientProfile:
    values = d.get("values")
    return CoefficientProfile(
        family=d["family"],
        dim=int(d["dim"]),
        gamma=d.get("gamma"),
        rate=d.get("rate"),
        values=np.array([pair_complex(p) for p in values]) if values is not None else None,
        phase_seed=d.get("phase_seed"),
    )


def perturbation_to_dict(pert: RankNPerturbation) -> dict:
    return {
        "lambdas": [float(x) for x in pert.lam],
        "vectors": [[complex_pair(v) for v in row] for row in pert.psi],
        "profiles": [profile_to_dict(p) for p in pert.profiles] if pert.profiles else None,
    }


def perturbation_from_dict(d: dict) -> RankNPerturbation:
    psi = np.array([[pair_complex(p) for p in row] for row in d["vectors"]])
    profiles = d.get("profiles")
    return RankNPerturbation(
        psi=psi,
        lam=np.asarray(d["lambdas"], dtype=float),
        profiles=tuple(profile_from_dict(p) for p in profiles) if profiles else None,
    )


def matrix_to_dict(matrix: np.ndarray) -> dict:
    """Dense complex matrix as row-major [re, im] pairs."""
    matrix = np.asarray(matrix, dtype=complex)
    return {
        "shape": list(matrix.shape),
        "entries": [complex_pair(z) for z in matrix.ravel(order="C")],
    }


def matrix_from_dict(d: dict) -> np.ndarray:
    flat = np.array([pair_complex(p) for p in d["entries"]])
    return flat.reshape(d["shape"], order="C")


def write_text_atomic(path: str, text: str):
    """Write via a temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path: str, obj):
    write_text_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_csv_atomic(path: str, columns, rows):
    lines = [SCHEMA_LINE, ",".join(columns)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else fmt(cell) for cell in row))
    write_text_atomic(path, "\n".join(lines) + "\n")


def spectral_result_to_csv(result: SpectralResult, path: str):
    rows = [(str(j), result.theta[j], result.residuals[j]) for j in range(result.dim)]
    write_csv_atomic(path, ("index", "theta", "residual"), rows)


def spectral_result_to_dict(result: SpectralResult, include_vectors: bool = False) -> dict:
    out = {
        "theta": [float(t) for t in result.theta],
        "residuals": [float(r) for r in result.residuals],
        "converged": bool(result.converged),
    }
    if include_vectors:
        out["vectors"] = [
            [complex_pair(z) for z in result.vectors[:, j]] for j in range(result.dim)
        ]
    return out


def measure_scan_to_dict(scan: MeasureScan) -> dict:
    return {
        "theta_grid": [float(t) for t in scan.theta_grid],
        "epsilon_ladder": [float(e) for e in scan.epsilon_ladder],
        "values": [[float(v) for v in row] for row in scan.values],
    }


def measure_scan_to_csv(scan: MeasureScan, path: str):
    rows = []
    for i, theta in enumerate(scan.theta_grid):
        for j, eps in enumerate(scan.epsilon_ladder):
            rows.append((theta, eps, scan.values[i, j]))
    write_csv_atomic(path, ("theta", "epsilon", "value"), rows)


def support_scan_to_csv(result: SupportScanResult, path: str):
    """G-norm values in the (theta, epsilon, value) schema."""
    rows = []
    for i, theta in enumerate(result.theta_grid):
        for j, eps in enumerate(result.epsilon_ladder):
            rows.append((theta, eps, result.g_values[i, j]))
    write_csv_atomic(path, ("theta", "epsilon", "value"), rows)


def trajectory_to_csv(record: TrajectoryRecord, path: str):
    rows = [
        (
            str(int(record.n[i])),
            record.energy[i],
            record.autocorr[i].real,
            record.autocorr[i].imag,
            record.participation[i],
            record.norm_drift[i],
        )
        for i in range(record.n.size)
    ]
    write_csv_atomic(
        path,
        ("n", "energy", "re_autocorr", "im_autocorr", "participation", "norm_drift"),
        rows,
    )
