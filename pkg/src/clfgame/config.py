"""JSON game configurations: schema, loading, bundled datasets.

A config file names the defender's models, the real attacks (the
no-attack action is implicit and appended by the loader), the
N x (M-1) robustness grid in row-major model order, and the economic
parameters.  See ``data/madry_wide.json`` for the shape.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import jsonschema

from .core import (
    AttackAction,
    EconomicParams,
    GameSpec,
    ModelProfile,
    ValidationReport,
    no_attack_action,
    validate_spec,
)

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["models", "attacks", "robustness", "economics"],
    "additionalProperties": False,
    "properties": {
        "models": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "acc"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "acc": {"type": "number"},
                    "ongoing_cost": {"type": "number"},
                },
            },
        },
        "attacks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "ongoing_cost": {"type": "number"},
                },
            },
        },
        "robustness": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}},
        },
        "economics": {
            "type": "object",
            "required": [
                "R_plus_def",
                "R_minus_def",
                "R_plus_adv",
                "R_minus_adv",
                "I_def",
                "I_adv",
                "n",
                "r_max",
            ],
            "additionalProperties": False,
            "properties": {
                "R_plus_def": {"type": "number"},
                "R_minus_def": {"type": "number"},
                "R_plus_adv": {"type": "number"},
                "R_minus_adv": {"type": "number"},
                "I_def": {"type": "number"},
                "I_adv": {"type": "number"},
                "n": {"type": "integer"},
                "r_max": {"type": "number"},
            },
        },
    },
}


class ConfigError(ValueError):
    """A config file failed to parse or match the schema."""


class SpecValidationError(ValueError):
    """A structurally well-formed config violated a game invariant."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("; ".join(report.violations))


def spec_from_dict(raw: dict) -> GameSpec:
    """Build a GameSpec from parsed config JSON (appends the no-attack action)."""
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as err:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"config field {where}: {err.message}") from err
    models = tuple(
        ModelProfile(
            name=m["name"], acc=m["acc"], ongoing_cost=m.get("ongoing_cost", 0.0)
        )
        for m in raw["models"]
    )
    attacks = tuple(
        AttackAction(name=a["name"], ongoing_cost=a.get("ongoing_cost", 0.0))
        for a in raw["attacks"]
    ) + (no_attack_action(),)
    rows = raw["robustness"]
    widths = {len(row) for row in rows}
    if len(rows) != len(models) or widths != {len(attacks) - 1}:
        raise ConfigError(
            f"config field robustness: expected {len(models)} rows of "
            f"{len(attacks) - 1} entries"
        )
    e = raw["economics"]
    economics = EconomicParams(
        r_plus_def=e["R_plus_def"],
        r_minus_def=e["R_minus_def"],
        r_plus_adv=e["R_plus_adv"],
        r_minus_adv=e["R_minus_adv"],
        i_def=e["I_def"],
        i_adv=e["I_adv"],
        n=e["n"],
        r_max=e["r_max"],
    )
    return GameSpec(models=models, attacks=attacks, robustness=rows, economics=economics)


def load_spec(path: str | Path) -> GameSpec:
    """Load and fully validate a config file.

    Raises ConfigError on parse/schema problems (with line or field
    context), SpecValidationError when game invariants fail, and lets
    OSError through for unreadable paths.
    """
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top-level JSON value must be an object")
    spec = spec_from_dict(raw)
    report = validate_spec(spec)
    if not report.ok:
        raise SpecValidationError(report)
    return spec


def bundled_config_path(name: str) -> Path:
    """Filesystem path of a dataset shipped with the package (e.g. 'madry_wide')."""
    candidate = resources.files("clfgame").joinpath("data", f"{name}.json")
    with resources.as_file(candidate) as p:
        return Path(p)
