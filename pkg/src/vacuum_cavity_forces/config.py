"""Scenario configuration: JSON schema, validation, and object construction.

Internally every frequency is expressed in inverse light-travel units (c = 1)
so that products like w*q are dimensionless.  A config may declare
``units: si`` in which case the mirror spacing q is given in meters and is
converted to light-seconds at the input boundary; frequencies are then
angular frequencies in rad/s, hbar defaults to the SI value, and forces are
converted to newtons at the output boundary (division by c).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from .cavity import CavityConfig
from .mirror import IdealBand, Lorentzian, MirrorModel, Tabulated, Transparent
from .numerics import QuadratureConfig, UniformTimeGrid

__all__ = [
    "ConfigError",
    "SCENARIO_SCHEMA",
    "OUTPUT_SCHEMAS",
    "Scenario",
    "load_scenario",
    "validate_output",
]

SPEED_OF_LIGHT = 299792458.0  # m/s
HBAR_SI = 1.054571817e-34  # J s

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

_MIRROR_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["variant", "omega_c"],
            "properties": {
                "variant": {"const": "lorentzian"},
                "omega_c": _POSITIVE,
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["variant", "cutoff"],
            "properties": {
                "variant": {"const": "ideal_band"},
                "cutoff": _POSITIVE,
            },
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["variant"],
            "properties": {"variant": {"const": "transparent"}},
        },
        {
            "type": "object",
            "additionalProperties": False,
            "required": ["variant", "path"],
            "properties": {
                "variant": {"const": "tabulated"},
                "path": {"type": "string"},
            },
        },
    ]
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["cavity"],
    "properties": {
        "units": {"enum": ["natural", "si"]},
        "cavity": {
            "type": "object",
            "additionalProperties": False,
            "required": ["q", "m1", "m2"],
            "properties": {
                "q": _POSITIVE,
                "hbar": _POSITIVE,
                "m1": _MIRROR_SCHEMA,
                "m2": _MIRROR_SCHEMA,
            },
        },
        "frequency_grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["min", "max", "count"],
            "properties": {
                "min": {"type": "number"},
                "max": {"type": "number"},
                "count": {"type": "integer", "minimum": 2},
            },
        },
        "time_grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["dt", "n"],
            "properties": {
                "t0": {"type": "number"},
                "dt": _POSITIVE,
                "n": {"type": "integer", "minimum": 2},
            },
        },
        "quadrature": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rel_tol": {"type": "number",
                            "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "abs_tol": {"type": "number", "minimum": 0},
                "max_subdivisions": {"type": "integer", "minimum": 1},
                "tail_cutoff": _POSITIVE,
                "tail_half_periods": {"type": "integer", "minimum": 0},
            },
        },
        "susceptibility": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"enum": ["full", "resonance_approx"]},
            },
        },
        "time_response": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"enum": ["full", "resonance_approx"]},
                "echo_count": {"type": "integer", "minimum": 1},
                "trajectory": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["mirror", "center", "width", "amplitude"],
                    "properties": {
                        "mirror": {"enum": [1, 2]},
                        "shape": {"enum": ["gaussian"]},
                        "center": {"type": "number"},
                        "width": _POSITIVE,
                        "amplitude": {"type": "number"},
                    },
                },
            },
        },
        "resonance_compare": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "indices": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 1},
                    "minItems": 1,
                },
                "element": {
                    "type": "array",
                    "items": {"enum": [1, 2]},
                    "minItems": 2,
                    "maxItems": 2,
                },
            },
        },
        "validate_mirror": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"target": {"enum": ["m1", "m2"]}},
        },
    },
}


def _table_schema(columns: list[str]) -> dict:
    return {
        "type": "object",
        "additionalProperties": False,
        "required": ["schema", "version", "columns", "rows"],
        "properties": {
            "schema": {"type": "string"},
            "version": {"type": "string"},
            "columns": {"const": columns},
            "rows": {
                "type": "array",
                "items": {
                    "type": "array",
                    "items": {"type": "number"},
                    "minItems": len(columns),
                    "maxItems": len(columns),
                },
            },
            "echoes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["component", "k", "delay", "amplitude",
                                 "absent"],
                    "properties": {
                        "component": {"enum": [1, 2]},
                        "k": {"type": "integer"},
                        "delay": {"type": "number"},
                        "amplitude": {"type": "number"},
                        "absent": {"type": "boolean"},
                    },
                },
            },
        },
    }


CHI_COLUMNS = ["omega",
               "re_chi11", "im_chi11", "re_chi12", "im_chi12",
               "re_chi21", "im_chi21", "re_chi22", "im_chi22"]
NOISE_COLUMNS = ["omega",
                 "re_c11", "im_c11", "re_c12", "im_c12",
                 "re_c21", "im_c21", "re_c22", "im_c22"]
FORCE_COLUMNS = ["F1", "F2", "error_bound"]
RESPONSE_COLUMNS = ["t", "dF1", "dF2"]

OUTPUT_SCHEMAS = {
    "chi-v1": _table_schema(CHI_COLUMNS),
    "noise-v1": _table_schema(NOISE_COLUMNS),
    "force-v1": _table_schema(FORCE_COLUMNS),
    "response-v1": _table_schema(RESPONSE_COLUMNS),
    "resonance-v1": {
        "type": "object",
        "additionalProperties": False,
        "required": ["schema", "version", "element", "entries"],
        "properties": {
            "schema": {"const": "resonance-v1"},
            "version": {"type": "string"},
            "element": {
                "type": "array",
                "items": {"enum": [1, 2]},
                "minItems": 2,
                "maxItems": 2,
            },
            "entries": {
                "type": "array",
                "items": {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["k", "omega_star", "chi_full",
                                 "chi_resonance", "rel_dev"],
                    "properties": {
                        "k": {"type": "integer"},
                        "omega_star": {"type": "number"},
                        "chi_full": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["re", "im"],
                            "properties": {"re": {"type": "number"},
                                           "im": {"type": "number"}},
                        },
                        "chi_resonance": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["re", "im"],
                            "properties": {"re": {"type": "number"},
                                           "im": {"type": "number"}},
                        },
                        "rel_dev": {"type": "number"},
                    },
                },
            },
        },
    },
    "mirror-report-v1": {
        "type": "object",
        "additionalProperties": False,
        "required": ["schema", "version", "target",
                     "max_reality_residual", "max_unitarity_residual",
                     "transparency_tail_norm", "causality_residual",
                     "reality_pass", "unitarity_pass", "transparency_pass",
                     "causality_pass", "passed"],
        "properties": {
            "schema": {"const": "mirror-report-v1"},
            "version": {"type": "string"},
            "target": {"enum": ["m1", "m2"]},
            "max_reality_residual": {"type": "number"},
            "max_unitarity_residual": {"type": "number"},
            "transparency_tail_norm": {"type": "number"},
            "causality_residual": {"type": "number"},
            "reality_pass": {"type": "boolean"},
            "unitarity_pass": {"type": "boolean"},
            "transparency_pass": {"type": "boolean"},
            "causality_pass": {"type": "boolean"},
            "passed": {"type": "boolean"},
        },
    },
}


class ConfigError(ValueError):
    """Configuration file missing, malformed, or schema-invalid."""


def _build_mirror(spec: dict, base_dir: Path) -> MirrorModel:
    variant = spec["variant"]
    if variant == "lorentzian":
        return Lorentzian(omega_c=spec["omega_c"])
    if variant == "ideal_band":
        return IdealBand(cutoff=spec["cutoff"])
    if variant == "transparent":
        return Transparent()
    path = Path(spec["path"])
    if not path.is_absolute():
        path = base_dir / path
    try:
        return Tabulated.from_csv(path)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"tabulated mirror: {exc}") from exc


@dataclass(frozen=True)
class Scenario:
    """Validated configuration turned into physics objects."""

    raw: dict
    cavity: CavityConfig
    quadrature: QuadratureConfig
    units: str

    @property
    def force_scale(self) -> float:
        """Multiplier taking internal force values to output units."""
        return 1.0 / SPEED_OF_LIGHT if self.units == "si" else 1.0

    def frequency_grid(self) -> np.ndarray:
        spec = self.raw.get("frequency_grid")
        if spec is None:
            raise ConfigError("this command requires a 'frequency_grid' "
                              "section in the config")
        return np.linspace(spec["min"], spec["max"], spec["count"])

    def time_grid(self) -> UniformTimeGrid:
        spec = self.raw.get("time_grid")
        if spec is None:
            raise ConfigError("this command requires a 'time_grid' section "
                              "in the config")
        try:
            return UniformTimeGrid(t0=spec.get("t0", 0.0), dt=spec["dt"],
                                   n=spec["n"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(raw, SCENARIO_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config rejected by schema: {exc.message}") from exc

    units = raw.get("units", "natural")
    cav = raw["cavity"]
    q = cav["q"]
    hbar = cav.get("hbar", HBAR_SI if units == "si" else 1.0)
    if units == "si":
        q = q / SPEED_OF_LIGHT  # meters -> light-seconds
    try:
        cavity = CavityConfig(
            q=q,
            m1=_build_mirror(cav["m1"], path.parent),
            m2=_build_mirror(cav["m2"], path.parent),
            hbar=hbar,
        )
        quadrature = QuadratureConfig(**raw.get("quadrature", {}))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return Scenario(raw=raw, cavity=cavity, quadrature=quadrature,
                    units=units)


def validate_output(report: dict) -> dict:
    """Check an emitted JSON report against its published schema."""
    name = report.get("schema")
    if name not in OUTPUT_SCHEMAS:
        raise ConfigError(f"unknown output schema {name!r}")
    jsonschema.validate(report, OUTPUT_SCHEMAS[name])
    return report
