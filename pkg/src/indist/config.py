"""Experiment configuration files (YAML, versioned by ``schema_version``).

Example::

    schema_version: 1
    interferometer:
      mode_count: 6
      layer1: [{modes: [2, 3], reflectivity: 0.5}, {modes: [4, 5], reflectivity: 0.5}]
      layer2: [{modes: [1, 2], reflectivity: 0.515}, ...]
      mode_loss: [0.196, 0.196, 0.196, 0.196, 0.1225, 0.196]
    source: {g: 0.1, injected_modes: {A: 1, B: 2, C: 5, D: 6}, include_six_photon_terms: true}
    detection: {mmfbs_reflectivity: [0.65, 0.77, 0.72, 0.77, 0.47, 0.15], eta_det: 0.6}
    visibilities: [0.944, 0.835, 0.915]
    delays: {values: [0, 0, 0], widths: [1, 1, 1]}   # optional
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

from .core import IndistError, MixtureModel
from .simulator.circuit import DetectionSpec, InterferometerSpec, SourceSpec
from .simulator.evolve import build_rho_source

SCHEMA_VERSION = 1

# which adjacent chain pairs (AB, BC, CD) are made identical in each configuration
CONFIGURATIONS: dict[str, tuple[bool, bool, bool]] = {
    "XXXX": (True, True, True),
    "XXXY": (True, True, False),
    "XXYY": (True, False, True),
    "XXYZ": (True, False, False),
    "XYYZ": (False, True, False),
    "XYWZ": (False, False, False),
}


class ConfigError(IndistError, ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    interferometer: InterferometerSpec
    source: SourceSpec
    detection: DetectionSpec
    visibilities: tuple[float, float, float] = (1.0, 1.0, 1.0)
    delays: tuple[float, float, float] | None = None
    widths: tuple[float, float, float] | None = None

    def model(self, configuration: str | None = None, visibilities=None) -> MixtureModel:
        """Zero-delay source mixture; a configuration switches pairs off."""
        vis = tuple(visibilities) if visibilities is not None else self.visibilities
        if configuration is not None:
            vis = configuration_visibilities(configuration, vis)
        return build_rho_source(*vis)


def configuration_visibilities(name: str, vis=(1.0, 1.0, 1.0)) -> tuple[float, float, float]:
    key = name.upper()
    if key not in CONFIGURATIONS:
        raise ConfigError(f"unknown configuration {name!r}; choose from {sorted(CONFIGURATIONS)}")
    return tuple(v if on else 0.0 for v, on in zip(vis, CONFIGURATIONS[key]))  # type: ignore[return-value]


def _layer(items: Any, where: str):
    if not isinstance(items, list):
        raise ConfigError(f"{where} must be a list")
    out = []
    for it in items:
        try:
            modes = tuple(int(m) for m in it["modes"])
            refl = float(it["reflectivity"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad beam splitter entry in {where}: {it!r}") from exc
        if len(modes) != 2:
            raise ConfigError(f"beam splitter in {where} needs two modes: {it!r}")
        out.append((modes, refl))
    return tuple(out)


def _triple(x: Any, where: str) -> tuple[float, float, float]:
    try:
        vals = tuple(float(v) for v in x)
    except TypeError as exc:
        raise ConfigError(f"{where} must be a list of three numbers") from exc
    if len(vals) != 3:
        raise ConfigError(f"{where} must have three entries")
    return vals  # type: ignore[return-value]


def config_from_dict(doc: Any) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a mapping")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    unknown = set(doc) - {"schema_version", "interferometer", "source", "detection", "visibilities", "delays"}
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    try:
        it = doc.get("interferometer", {}) or {}
        default = InterferometerSpec.measured()
        m = int(it.get("mode_count", 6))
        spec = InterferometerSpec(
            m,
            _layer(it["layer1"], "layer1") if "layer1" in it else default.layer1,
            _layer(it["layer2"], "layer2") if "layer2" in it else default.layer2,
            tuple(float(x) for x in it.get("mode_loss", (1.0,) * m)),
        )
        src = doc.get("source", {}) or {}
        source = SourceSpec(
            float(src.get("g", 0.1)),
            {str(k): int(v) for k, v in src["injected_modes"].items()} if "injected_modes" in src else SourceSpec().injected_modes,
            bool(src.get("include_six_photon_terms", True)),
        )
        det = doc.get("detection", {}) or {}
        detection = DetectionSpec(
            tuple(det.get("mmfbs_reflectivity", DetectionSpec().mmfbs_reflectivity)),
            float(det.get("eta_det", 0.6)),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError) as exc:
        raise ConfigError(str(exc)) from exc
    vis = _triple(doc.get("visibilities", (1.0, 1.0, 1.0)), "visibilities")
    if any(not (0.0 <= v <= 1.0) for v in vis):
        raise ConfigError(f"visibilities must lie in [0, 1]: {vis}")
    delays = widths = None
    if doc.get("delays") is not None:
        d = doc["delays"]
        if not isinstance(d, dict):
            raise ConfigError("delays must be a mapping with values and widths")
        delays = _triple(d.get("values"), "delays.values")
        widths = _triple(d.get("widths"), "delays.widths")
        if any(w <= 0 for w in widths):
            raise ConfigError("delay widths must be positive")
    return ExperimentConfig(spec, source, detection, vis, delays, widths)


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return config_from_dict(doc)


def reference_config_dict() -> dict:
    spec = InterferometerSpec.measured(lossy=True)
    src = SourceSpec()
    det = DetectionSpec()
    return {
        "schema_version": SCHEMA_VERSION,
        "interferometer": {
            "mode_count": spec.mode_count,
            "layer1": [{"modes": list(p), "reflectivity": r} for p, r in spec.layer1],
            "layer2": [{"modes": list(p), "reflectivity": r} for p, r in spec.layer2],
            "mode_loss": list(spec.mode_loss),
        },
        "source": {
            "g": src.g,
            "injected_modes": dict(src.injected_modes),
            "include_six_photon_terms": src.include_six_photon_terms,
        },
        "detection": {"mmfbs_reflectivity": list(det.mmfbs_reflectivity), "eta_det": det.eta_det},
        "visibilities": [0.944, 0.835, 0.915],
    }
