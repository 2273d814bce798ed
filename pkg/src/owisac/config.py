"""JSON experiment configuration: schema, defaults and resolution.

Every key is optional; omitted keys fall back to the defaults below: the
default FMCW chirp and the A = 0.1, B = 1.0 envelope with the two reference
harmonic-mean bounds. See ``docs/config.md`` for the field reference.
"""

import copy
import json

import jsonschema

from .errors import ConfigError

_number = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_grid = {
    "oneOf": [
        {"type": "array", "items": _number, "minItems": 1},
        {
            "type": "object",
            "properties": {"start": _number, "stop": _number, "step": _pos},
            "required": ["start", "stop", "step"],
            "additionalProperties": False,
        },
    ]
}
_constraint = {
    "type": "object",
    "properties": {
        "a_min": _pos,
        "b_peak": _pos,
        "sigma_h": _pos,
        "nsp": {"type": "number", "minimum": 0, "maximum": 1},
    },
    "required": ["a_min", "b_peak"],
    "additionalProperties": False,
}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "constraints": {"type": "array", "items": _constraint, "minItems": 1},
        "snr_db": _grid,
        "sense_snr_db": _grid,
        "nsp": _grid,
        "ab_pairs": {
            "type": "array",
            "items": {"type": "array", "items": _pos, "minItems": 2, "maxItems": 2},
            "minItems": 1,
        },
        "pam_orders": {"type": "array", "items": {"type": "integer", "minimum": 2}, "minItems": 1},
        "cdf_points": {"type": "integer", "minimum": 2},
        "tol_eta": _pos,
        "fmcw": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "carrier_hz": _pos,
                "chirp_bandwidth_hz": _pos,
                "period_s": _pos,
                "symbols_per_period": {"type": "integer", "minimum": 1},
                "sample_rate_hz": _pos,
                "light_speed_mps": _pos,
            },
        },
        "scenario": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "range_m": _pos,
                "velocity_mps": _number,
                "comm_offset_m": _number,
                "sense_offset_m": _number,
                "reflectivity": _pos,
                "waist_m": _pos,
                "rayleigh_m": _pos,
                "amplitude": _pos,
                "responsivity_comm": _pos,
                "responsivity_sense": _pos,
            },
        },
        "noise": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"sigma_comm": {"type": "number", "minimum": 0}},
        },
        "trials": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
    },
}

DEFAULTS = {
    "constraints": [
        {"a_min": 0.1, "b_peak": 1.0, "sigma_h": 1.156},
        {"a_min": 0.1, "b_peak": 1.0, "sigma_h": 2.406},
    ],
    "snr_db": {"start": -10, "stop": 40, "step": 5},
    "sense_snr_db": {"start": -10, "stop": 40, "step": 5},
    "nsp": {"start": 0.0, "stop": 0.9, "step": 0.1},
    "ab_pairs": [[0.1, 1.0], [0.2, 1.0]],
    "pam_orders": [4, 8, 16, 64],
    "cdf_points": 201,
    "tol_eta": 1e-10,
    "fmcw": {},
    "scenario": {"range_m": 7.5, "velocity_mps": 10.0},
    "noise": {"sigma_comm": 0.0},
    "trials": 1000,
    "seed": 0,
    "workers": 1,
}


def expand_grid(spec):
    """A list of floats from either an explicit list or a start/stop/step object.

    ``stop`` is inclusive when it lies on the grid.
    """
    if isinstance(spec, list):
        return [float(v) for v in spec]
    start, stop, step = spec["start"], spec["stop"], spec["step"]
    n = int((stop - start) / step + 1e-9) + 1
    return [round(start + i * step, 12) for i in range(n)]


def _format_error(err):
    path = "/".join(str(p) for p in err.absolute_path) or "<root>"
    return f"field '{path}': {err.message}"


def validate(raw):
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as err:
        raise ConfigError(_format_error(err)) from None


def resolve(raw=None, **overrides):
    """Validate ``raw`` and merge it over :data:`DEFAULTS`.

    Keyword overrides that are ``None`` are ignored, so CLI flags can be
    passed straight through.
    """
    raw = {} if raw is None else raw
    validate(raw)
    cfg = copy.deepcopy(DEFAULTS)
    for key, value in raw.items():
        if isinstance(value, dict) and isinstance(cfg.get(key), dict) and key not in ("snr_db", "sense_snr_db", "nsp"):
            cfg[key] = {**cfg[key], **value}
        else:
            cfg[key] = copy.deepcopy(value)
    for key, value in overrides.items():
        if value is not None:
            cfg[key] = value
    validate(cfg)
    return cfg


def load(path):
    """Read a JSON config file; decode errors carry line and column."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: line {err.lineno} column {err.colno}: {err.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return raw
