"""Run configuration: a flat ``key = value`` document.

Lists are space separated, ``#`` starts a comment, blank lines are ignored.
Unknown keys, repeated keys and keys that do not apply to the chosen mode
are errors.  Grids are written ``start stop count``.

Keys per mode::

    spectrum      gamma gamma0 detunings phases grid
    transparency  gamma gamma0 phases magnitudes [leftover] [permutation] [probe] grid
    cavity        kappa g cavity_detuning detunings grid
    eta-map       gamma gamma0 mean_detuning theta_grid s_grid
    eta-argmax    gamma gamma0 mean_detuning theta_range s_range [scan]
    oracle-check  [cases] [max_sites]
    (all modes)   mode [out] [format] [seed]

``phases`` may be a single value, applied to every site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, ValidationError
from .model import SweepGrid

MODES = ("spectrum", "transparency", "cavity", "eta-map", "eta-argmax", "oracle-check")
COMMON = {"mode", "out", "format", "seed"}
REQUIRED = {
    "spectrum": {"gamma", "gamma0", "detunings", "phases", "grid"},
    "transparency": {"gamma", "gamma0", "phases", "magnitudes", "grid"},
    "cavity": {"kappa", "g", "cavity_detuning", "detunings", "grid"},
    "eta-map": {"gamma", "gamma0", "mean_detuning", "theta_grid", "s_grid"},
    "eta-argmax": {"gamma", "gamma0", "mean_detuning", "theta_range", "s_range"},
    "oracle-check": set(),
}
OPTIONAL = {
    "spectrum": set(),
    "transparency": {"leftover", "permutation", "probe"},
    "cavity": set(),
    "eta-map": set(),
    "eta-argmax": {"scan"},
    "oracle-check": {"cases", "max_sites"},
}
U64_MAX = 2**64 - 1


@dataclass
class RunConfig:
    mode: str
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "csv"
    seed: int = 0


def _floats(text, key, line):
    try:
        values = [float(tok) for tok in text.split()]
    except ValueError:
        raise ConfigError(f"{key}: expected numbers, got {text!r}", key, line) from None
    if not values:
        raise ConfigError(f"{key}: missing value", key, line)
    if not all(math.isfinite(v) for v in values):
        raise ConfigError(f"{key}: values must be finite", key, line)
    return values


def _scalar(text, key, line):
    values = _floats(text, key, line)
    if len(values) != 1:
        raise ConfigError(f"{key}: expected one number", key, line)
    return values[0]


def _int(text, key, line, lo=0, hi=None):
    try:
        value = int(text.strip())
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}", key, line) from None
    if value < lo or (hi is not None and value > hi):
        raise ConfigError(f"{key}: {value} out of range", key, line)
    return value


def _grid(text, key, line):
    parts = text.split()
    if len(parts) != 3:
        raise ConfigError(f"{key}: expected 'start stop count'", key, line)
    start, stop = _floats(" ".join(parts[:2]), key, line)
    count = _int(parts[2], key, line)
    try:
        return SweepGrid(start, stop, count)
    except ValidationError as exc:
        raise ConfigError(f"{key}: {exc}", key, line) from None


def _pair(text, key, line):
    values = _floats(text, key, line)
    if len(values) != 2 or values[0] > values[1]:
        raise ConfigError(f"{key}: expected 'low high' with low <= high", key, line)
    return tuple(values)


def _convert(key, text, line):
    if key in ("gamma", "g", "kappa"):
        value = _scalar(text, key, line)
        if value < 0 or (value == 0 and key != "g"):
            raise ConfigError(f"{key} must be {'non-negative' if key == 'g' else 'positive'}", key, line)
        return value
    if key == "gamma0":
        value = _scalar(text, key, line)
        if value < 0:
            raise ConfigError("gamma0 must be non-negative", key, line)
        return value
    if key in ("mean_detuning", "cavity_detuning", "leftover", "probe"):
        return _scalar(text, key, line)
    if key in ("detunings", "phases", "magnitudes"):
        return _floats(text, key, line)
    if key == "permutation":
        return [_int(tok, key, line) for tok in text.split()]
    if key in ("grid", "theta_grid", "s_grid"):
        return _grid(text, key, line)
    if key in ("theta_range", "s_range"):
        return _pair(text, key, line)
    if key == "scan":
        parts = text.split()
        if len(parts) != 2:
            raise ConfigError("scan: expected two counts", key, line)
        return tuple(_int(p, key, line, lo=2) for p in parts)
    if key == "cases":
        return _int(text, key, line, lo=1)
    if key == "max_sites":
        return _int(text, key, line, lo=1, hi=64)
    raise ConfigError(f"unknown key {key!r}", key, line)


def parse_config(text: str) -> RunConfig:
    raw = {}
    for lineno, original in enumerate(text.splitlines(), start=1):
        body = original.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {original.strip()!r}", line=lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if not key:
            raise ConfigError("empty key", line=lineno)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", key, lineno)
        raw[key] = (value, lineno)

    if "mode" not in raw:
        raise ConfigError("missing required key 'mode'", "mode")
    mode, mode_line = raw["mode"]
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}; got {mode!r}", "mode", mode_line)

    allowed = COMMON | REQUIRED[mode] | OPTIONAL[mode]
    for key, (_, lineno) in raw.items():
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} for mode {mode}", key, lineno)

    cfg = RunConfig(mode=mode)
    for key, (value, lineno) in raw.items():
        if key == "mode":
            continue
        if key == "out":
            if not value:
                raise ConfigError("out: empty path", key, lineno)
            cfg.out = value
        elif key == "format":
            if value != "csv":
                raise ConfigError(f"format: only 'csv' is supported, got {value!r}", key, lineno)
            cfg.format = value
        elif key == "seed":
            cfg.seed = _int(value, key, lineno, lo=0, hi=U64_MAX)
        else:
            cfg.params[key] = _convert(key, value, lineno)
    missing = sorted(REQUIRED[mode] - raw.keys())
    if missing:
        raise ConfigError(f"missing required key {missing[0]!r} for mode {mode}", missing[0])

    p = cfg.params
    if mode == "spectrum":
        n = len(p["detunings"])
        if len(p["phases"]) == 1:
            p["phases"] = p["phases"] * n
        elif len(p["phases"]) != n:
            raise ConfigError(
                f"phases has {len(p['phases'])} entries, detunings has {n}", "phases", raw["phases"][1]
            )
    if mode == "transparency" and len(p["phases"]) != 1:
        raise ConfigError("transparency: phases takes a single value", "phases", raw["phases"][1])
    return cfg
