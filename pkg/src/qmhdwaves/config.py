"""Run configuration: flat key = value files with section headers.

The format is deliberately tiny: `[section]` headers, `key = value` lines,
`#` comments, nothing nested.  Every key lives in exactly one section and
key names are unique across sections, so each key doubles as a command-line
override flag.  Parsing remembers source line numbers and reports them in
every error; writing emits a canonical form that parses back to an equal
configuration (lossless round-trip).
"""

from dataclasses import dataclass, field

import numpy as np

from .core import (DissipationParams, PlasmaBackground, QmhdError,
                   ValidationError, validate_background)
from .linsim import SimGrid


class ConfigError(QmhdError):
    """Malformed configuration file or override."""


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # float | int | str | int_list | auto_float
    default: object
    help: str


SCHEMA = {
    "background": {
        "rho0": FieldSpec("float", 1.0, "equilibrium mass density (> 0)"),
        "p0": FieldSpec("float", 0.0, "equilibrium pressure (informational)"),
        "h0x": FieldSpec("float", 1.0, "background field component x"),
        "h0y": FieldSpec("float", 0.0, "background field component y"),
        "h0z": FieldSpec("float", 0.0, "background field component z"),
        "u0": FieldSpec("float", 1.0, "classical sound speed (>= 0)"),
        "mass": FieldSpec("float", 1.0, "particle mass (> 0)"),
        "hbar": FieldSpec("float", 1.0, "Planck constant; 0 = classical"),
    },
    "grid": {
        "n_points": FieldSpec("int", 512, "grid points (power of two)"),
        "length": FieldSpec("float", 32.0, "periodic domain length"),
    },
    "dissipation": {
        "eta": FieldSpec("float", 0.0, "shear viscosity (>= 0)"),
        "xi": FieldSpec("float", 0.0, "bulk viscosity (>= 0)"),
    },
    "soliton": {
        "b": FieldSpec("float", 0.25, "log-nonlinearity strength (> 0)"),
        "carrier_index": FieldSpec("int", 16, "carrier wavenumber index"),
        "omega": FieldSpec("auto_float", None,
                           "carrier frequency; auto = normalized preset"),
        "c": FieldSpec("auto_float", None,
                       "amplitude constant; auto = normalized preset"),
        "offset": FieldSpec("float", 0.0, "soliton center offset d"),
        "dt_factor": FieldSpec("float", 0.1,
                               "step = dt_factor * mass * dx^2 / hbar"),
        "transits": FieldSpec("float", 1.0, "evolution time in domain transits"),
    },
    "scan": {
        "branch": FieldSpec("str", "alfven", "alfven | fast | slow"),
        "k_indices": FieldSpec("int_list", (8,),
                               "comma-separated mode indices"),
        "amplitude": FieldSpec("float", 1e-6, "seed amplitude"),
        "periods": FieldSpec("float", 8.0, "oscillation periods to simulate"),
        "samples_per_period": FieldSpec("int", 16, "series samples per period"),
        "cfl_factor": FieldSpec("float", 0.2,
                                "step = cfl_factor / omega_max"),
    },
}

_KEY_SECTION = {}
for _section, _fields in SCHEMA.items():
    for _key in _fields:
        if _key in _KEY_SECTION:
            raise RuntimeError(f"duplicate schema key {_key}")
        _KEY_SECTION[_key] = _section


def _convert(key, raw, where):
    spec = SCHEMA[_KEY_SECTION[key]][key]
    raw = raw.strip()
    try:
        if spec.kind == "float":
            value = float(raw)
            if not np.isfinite(value):
                raise ValueError("must be finite")
            return value
        if spec.kind == "int":
            return int(raw)
        if spec.kind == "str":
            return raw
        if spec.kind == "int_list":
            parts = [p for p in raw.replace(",", " ").split() if p]
            if not parts:
                raise ValueError("empty list")
            return tuple(int(p) for p in parts)
        if spec.kind == "auto_float":
            if raw.lower() == "auto":
                return None
            value = float(raw)
            if not np.isfinite(value):
                raise ValueError("must be finite")
            return value
    except ValueError as exc:
        raise ConfigError(f"{where}: invalid value {raw!r} for key "
                          f"{key!r} ({exc})") from None
    raise RuntimeError(f"unknown kind {spec.kind}")


def _format_value(key, value):
    spec = SCHEMA[_KEY_SECTION[key]][key]
    if spec.kind == "int_list":
        return ",".join(str(v) for v in value)
    if spec.kind == "auto_float":
        return "auto" if value is None else repr(float(value))
    if spec.kind == "float":
        return repr(float(value))
    return str(value)


@dataclass(frozen=True)
class RunConfig:
    """Typed configuration values plus the source line of each one."""

    values: dict
    lines: dict = field(default_factory=dict, compare=False)

    @classmethod
    def defaults(cls):
        return cls(values={s: {k: spec.default for k, spec in fields.items()}
                           for s, fields in SCHEMA.items()})

    def get(self, key):
        return self.values[_KEY_SECTION[key]][key]

    def _reraise_with_line(self, exc):
        field_name = str(exc).split()[0]
        where = self.lines.get(field_name)
        if where:
            raise type(exc)(f"{where}: {exc}") from None
        raise exc

    def background(self):
        try:
            bg = PlasmaBackground(
                rho0=self.get("rho0"), p0=self.get("p0"),
                H0=(self.get("h0x"), self.get("h0y"), self.get("h0z")),
                u0=self.get("u0"), mass=self.get("mass"),
                hbar=self.get("hbar"))
            return validate_background(bg)
        except ValidationError as exc:
            self._reraise_with_line(exc)

    def grid(self):
        try:
            return SimGrid(n_points=self.get("n_points"),
                           length=self.get("length"))
        except ValidationError as exc:
            self._reraise_with_line(exc)

    def dissipation(self):
        try:
            return DissipationParams(eta=self.get("eta"), xi=self.get("xi"))
        except ValidationError as exc:
            self._reraise_with_line(exc)

    def replaced(self, key, value, where=None):
        section = _KEY_SECTION[key]
        values = {s: dict(kv) for s, kv in self.values.items()}
        values[section][key] = value
        lines = dict(self.lines)
        if where is not None:
            lines[key] = where
        return RunConfig(values=values, lines=lines)

    def to_text(self):
        """Canonical text form; parses back to an equal configuration."""
        out = []
        for section, fields_ in SCHEMA.items():
            out.append(f"[{section}]")
            for key in fields_:
                out.append(f"{key} = "
                           f"{_format_value(key, self.values[section][key])}")
            out.append("")
        return "\n".join(out)


def parse_config_text(text, source="<config>"):
    """Parse config text; every complaint carries source:line."""
    cfg = RunConfig.defaults()
    section = None
    seen = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"{where}: unterminated section header "
                                  f"{raw_line.strip()!r}")
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError(f"{where}: unknown section [{section}]; "
                                  f"expected one of {sorted(SCHEMA)}")
            continue
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got "
                              f"{raw_line.strip()!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        if section is None:
            raise ConfigError(f"{where}: key {key!r} appears before any "
                              "[section] header")
        if key not in SCHEMA[section]:
            raise ConfigError(f"{where}: unknown key {key!r} in section "
                              f"[{section}]")
        if key in seen:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        seen.add(key)
        cfg = cfg.replaced(key, _convert(key, raw_value, where), where)
    return cfg


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    return parse_config_text(text, source=str(path))


def apply_overrides(cfg, overrides, source="<command line>"):
    """Apply {key: raw string} overrides on top of a configuration."""
    for key, raw in overrides.items():
        if key not in _KEY_SECTION:
            raise ConfigError(f"{source}: unknown key {key!r}")
        where = f"{source} --{key}"
        cfg = cfg.replaced(key, _convert(key, raw, where), where)
    return cfg
