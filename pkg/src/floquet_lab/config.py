"""Experiment configs: one JSON document describing model, perturbation,
experiment and outputs. Parsing problems raise ConfigError; semantic
inconsistencies raise ValidationError."""

from __future__ import annotations

import copy
import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ValidationError
from .floquet import FloquetModel
from .model import (
    DEFAULT_HBAR,
    DEFAULT_PERIOD,
    CoefficientProfile,
    build_base_hamiltonian,
    classify_summability,
    perturbation_from_profiles,
)

EXPERIMENT_TYPES = ("spectrum", "evolve", "scan", "verify", "sweep")
_MODEL_KINDS = ("rotor", "linear", "harmonic", "custom")
_PATH_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)((?:\[\d+\])*)$")


@dataclass
class SweepAxis:
    path: str
    values: list


@dataclass
class ExperimentConfig:
    """Validated config with every default made explicit."""

    raw: dict
    experiment_type: str
    params: dict
    output_directory: str
    output_formats: tuple
    model_section: dict | None
    perturbation_section: dict | None
    axis: SweepAxis | None

    def build_base(self):
        m = self.model_section
        return build_base_hamiltonian(
            m["kind"], m["dim"], custom_alpha=m.get("custom_alpha"),
            period_T=m["T"], hbar=m["hbar"],
        )

    def build_profiles(self) -> list[CoefficientProfile]:
        p = self.perturbation_section
        dim = self.model_section["dim"]
        profiles = []
        for entry in p["profiles"]:
            values = entry.get("values")
            profiles.append(
                CoefficientProfile(
                    family=entry["family"],
                    dim=int(entry.get("dim", dim)),
                    gamma=entry.get("gamma"),
                    rate=entry.get("rate"),
                    values=np.array([complex(v[0], v[1]) for v in values])
                    if values is not None
                    else None,
                    phase_seed=entry.get("phase_seed"),
                )
            )
        return profiles

    def build_model(self) -> FloquetModel:
        base = self.build_base()
        pert = perturbation_from_profiles(self.build_profiles(),
                                          self.perturbation_section["lambdas"])
        return FloquetModel(base=base, pert=pert)

    def profile_classes(self) -> list[str]:
        return [classify_summability(p).tag for p in self.build_profiles()]

    def seeds(self) -> dict:
        out = {}
        if self.perturbation_section:
            for k, entry in enumerate(self.perturbation_section["profiles"]):
                if entry.get("phase_seed") is not None:
                    out[f"profile[{k}].phase_seed"] = entry["phase_seed"]
        if "seed" in self.params:
            out["experiment.seed"] = self.params["seed"]
        return out


def load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config-error: cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config-error: {path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc


def _require(section, key, kind, where):
    if key not in section:
        raise ConfigError(f"config-error: missing field '{where}.{key}'")
    value = section[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"config-error: field '{where}.{key}' has wrong type")
    return value


def resolve_path(raw: dict, path: str):
    """Follow a dotted path with [i] indexing; returns (parent, final key/index)."""
    node = raw
    tokens = path.split(".")
    trail = []
    for tok in tokens:
        m = _PATH_TOKEN.match(tok)
        if not m:
            raise ConfigError(f"config-error: invalid axis path segment {tok!r}")
        name, idx_part = m.group(1), m.group(2)
        trail.append((node, name))
        if not isinstance(node, dict) or name not in node:
            raise ConfigError(f"config-error: axis path {path!r} not found at {name!r}")
        node = node[name]
        for idx in re.findall(r"\[(\d+)\]", idx_part):
            i = int(idx)
            if not isinstance(node, list) or i >= len(node):
                raise ConfigError(f"config-error: axis path {path!r} index {i} out of range")
            trail.append((node, i))
            node = node[i]
    if not isinstance(node, (int, float)) or isinstance(node, bool):
        raise ConfigError(f"config-error: axis path {path!r} is not a numeric leaf")
    return trail[-1]


def set_path(raw: dict, path: str, value):
    parent, key = resolve_path(raw, path)
    parent[key] = value


def validate_config(raw: dict) -> ExperimentConfig:
    """Normalize and cross-check one raw config document."""
    if not isinstance(raw, dict):
        raise ConfigError("config-error: top level must be an object")
    raw = copy.deepcopy(raw)

    experiment = _require(raw, "experiment", dict, "")
    exp_type = _require(experiment, "type", str, "experiment")
    if exp_type not in EXPERIMENT_TYPES:
        raise ValidationError(
            f"validation-error: unknown experiment type {exp_type!r}, "
            f"expected one of {EXPERIMENT_TYPES}"
        )
    params = experiment.setdefault("params", {})
    if not isinstance(params, dict):
        raise ConfigError("config-error: experiment.params must be an object")

    output = raw.setdefault("output", {})
    out_dir = output.setdefault("directory", "out")
    formats = tuple(output.setdefault("formats", ["csv", "json"]))

    model = raw.get("model")
    pert = raw.get("perturbation")
    needs_model = exp_type in ("spectrum", "evolve", "scan") or (
        exp_type == "sweep"
    )
    if needs_model:
        if model is None:
            raise ConfigError("config-error: missing 'model' section")
        if pert is None:
            raise ConfigError("config-error: missing 'perturbation' section")

    if model is not None:
        kind = _require(model, "kind", str, "model")
        if kind not in _MODEL_KINDS:
            raise ValidationError(f"validation-error: unknown model kind {kind!r}")
        dim = _require(model, "dim", int, "model")
        if dim < 1:
            raise ValidationError("validation-error: model.dim must be >= 1")
        model.setdefault("T", DEFAULT_PERIOD)
        model.setdefault("hbar", DEFAULT_HBAR)
        if kind == "custom":
            alpha = _require(model, "custom_alpha", list, "model")
            if len(alpha) != dim:
                raise ValidationError(
                    "validation-error: custom_alpha length must equal model.dim"
                )

    if pert is not None:
        profiles = _require(pert, "profiles", list, "perturbation")
        lambdas = _require(pert, "lambdas", list, "perturbation")
        n = pert.setdefault("N", len(profiles))
        if not (n == len(profiles) == len(lambdas)):
            raise ValidationError(
                "validation-error: perturbation.N, profiles and lambdas lengths differ"
            )
        if model is not None:
            if n > model["dim"]:
                raise ValidationError("validation-error: rank N exceeds model.dim")
            for k, entry in enumerate(profiles):
                if not isinstance(entry, dict):
                    raise ConfigError(f"config-error: profiles[{k}] must be an object")
                pdim = entry.setdefault("dim", model["dim"])
                if pdim != model["dim"]:
                    raise ValidationError(
                        f"validation-error: profiles[{k}].dim differs from model.dim"
                    )

    axis = None
    if exp_type == "sweep":
        axis_raw = _require(params, "axis", dict, "experiment.params")
        path = _require(axis_raw, "path", str, "experiment.params.axis")
        values = _require(axis_raw, "values", list, "experiment.params.axis")
        if len(values) == 0:
            raise ValidationError("validation-error: empty axis values")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            raise ValidationError("validation-error: axis values must be numeric")
        nested = _require(params, "experiment", dict, "experiment.params")
        nested_type = _require(nested, "type", str, "experiment.params.experiment")
        if nested_type not in EXPERIMENT_TYPES or nested_type == "sweep":
            raise ValidationError(
                f"validation-error: invalid nested experiment type {nested_type!r}"
            )
        resolve_path(raw, path)  # must exist and be numeric
        axis = SweepAxis(path=path, values=list(values))

    return ExperimentConfig(
        raw=raw,
        experiment_type=exp_type,
        params=params,
        output_directory=out_dir,
        output_formats=formats,
        model_section=model,
        perturbation_section=pert,
        axis=axis,
    )


def load_config(path: str) -> ExperimentConfig:
    return validate_config(load_config_file(path))
