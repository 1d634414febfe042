"""Preset, override-layer, and skeleton-template files.

All three are versioned YAML with strict field checking: unknown or
missing fields raise ValueError naming the field.
"""

from __future__ import annotations

from dataclasses import fields
from importlib import resources
from pathlib import Path

import yaml

from .gait import GaitParams, GaitPreset, params_from_dict, params_to_dict
from .layers import AnimLayer, OverrideTrack
from .skeleton import TemplateConfig

FORMAT_VERSION = 1


def write_preset(preset: GaitPreset, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "name": preset.name,
        "params": params_to_dict(preset.params),
    }
    Path(path).write_text(yaml.safe_dump(doc, sort_keys=False))


def _load_document(path, kind: str) -> dict:
    try:
        doc = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as err:
        raise ValueError(f"malformed {kind} file {path}: {err}") from err
    if not isinstance(doc, dict):
        raise ValueError(f"{kind} file {path} must hold a mapping")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    return doc


def read_preset(path) -> GaitPreset:
    """Exact inverse of write_preset; unknown or missing fields raise."""
    doc = _load_document(path, "preset")
    for key in doc:
        if key not in ("format_version", "name", "params"):
            raise ValueError(f"unknown field '{key}'")
    if "name" not in doc:
        raise ValueError("missing required field 'name'")
    if "params" not in doc:
        raise ValueError("missing required field 'params'")
    return GaitPreset(name=str(doc["name"]), params=params_from_dict(doc["params"]))


def packaged_preset_path(name: str) -> Path:
    """Path of a preset file shipped inside the package."""
    candidate = resources.files("quadgait").joinpath(f"presets/{name}.yaml")
    if not candidate.is_file():
        raise KeyError(f"no packaged preset file '{name}'")
    return Path(str(candidate))


def write_layer(layer: AnimLayer, path) -> None:
    doc = {
        "format_version": FORMAT_VERSION,
        "enabled": layer.enabled,
        "tracks": [
            {
                "joint": t.joint,
                "channel": t.channel,
                "mode": t.mode,
                "weight": t.weight,
                "keys": [[frame, value] for frame, value in t.keys],
            }
            for t in layer.tracks
        ],
    }
    Path(path).write_text(yaml.safe_dump(doc, sort_keys=False))


_TEMPLATE_FIELDS = tuple(f.name for f in fields(TemplateConfig))


def write_template(config: TemplateConfig, path) -> None:
    doc = {"format_version": FORMAT_VERSION, "template": {}}
    for name in _TEMPLATE_FIELDS:
        value = getattr(config, name)
        if value is not None:
            doc["template"][name] = value
    Path(path).write_text(yaml.safe_dump(doc, sort_keys=False))


def read_template(path) -> TemplateConfig:
    """Skeleton template config from a file; fields default when omitted."""
    doc = _load_document(path, "template")
    for key in doc:
        if key not in ("format_version", "template"):
            raise ValueError(f"unknown field '{key}'")
    body = doc.get("template", {})
    if not isinstance(body, dict):
        raise ValueError("'template' must be a mapping")
    for key in body:
        if key not in _TEMPLATE_FIELDS:
            raise ValueError(f"unknown field 'template.{key}'")
    kwargs = {}
    for key, value in body.items():
        kwargs[key] = int(value) if key.endswith("_joints") else float(value)
    return TemplateConfig(**kwargs)


_TRACK_FIELDS = ("joint", "channel", "mode", "weight", "keys")


def read_layer(path) -> AnimLayer:
    doc = _load_document(path, "layer")
    for key in doc:
        if key not in ("format_version", "enabled", "tracks"):
            raise ValueError(f"unknown field '{key}'")
    tracks = []
    for i, entry in enumerate(doc.get("tracks", [])):
        if not isinstance(entry, dict):
            raise ValueError(f"track {i} must be a mapping")
        for key in entry:
            if key not in _TRACK_FIELDS:
                raise ValueError(f"track {i}: unknown field '{key}'")
        for key in ("joint", "channel", "keys"):
            if key not in entry:
                raise ValueError(f"track {i}: missing required field '{key}'")
        keys = tuple((float(f), float(v)) for f, v in entry["keys"])
        tracks.append(
            OverrideTrack(
                joint=str(entry["joint"]),
                channel=str(entry["channel"]),
                keys=keys,
                mode=str(entry.get("mode", "additive")),
                weight=float(entry.get("weight", 1.0)),
            )
        )
    return AnimLayer(tracks=tuple(tracks), enabled=bool(doc.get("enabled", True)))
