"""Flat ``key = value`` run configuration.

Example::

    # two-detector fringe versus analyser angle
    experiment = two-detector
    sweep = phi34
    sweep_start = 0
    sweep_stop = 180
    sweep_step = 2.8125
    degrees = true
    wavelength = 5e-07
    distance = 100000.0
    source_separation = 0.1
    detector_separation = 0.0
    n_b = 0.1

Blank lines and ``#`` comments are ignored.  Keys are listed in
:data:`FIELD_DOCS`; values that are lists are comma separated.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields
from typing import Iterable

from .errors import HBTPhaseError


class ConfigError(HBTPhaseError, ValueError):
    """Malformed or inconsistent run configuration."""


EXPERIMENTS = ("two-detector", "entanglement", "three-slit")
SWEEPS = {
    "two-detector": ("phi34", "detector_separation"),
    "entanglement": ("omega",),
    "three-slit": ("rotation",),
}
ANGULAR_SWEEPS = {"phi34", "omega", "rotation"}

FIELD_DOCS = {
    "experiment": "two-detector | entanglement | three-slit",
    "sweep": "phi34 | detector_separation (two-detector), omega (entanglement), rotation (three-slit)",
    "sweep_start": "first sweep value",
    "sweep_stop": "sweep upper bound (exclusive)",
    "sweep_step": "sweep increment, > 0",
    "degrees": "angles (phi3, phi4, angular sweeps) are in degrees",
    "wavelength": "metres",
    "distance": "nominal source-detector distance l, metres",
    "source_separation": "d_S, metres (two-detector)",
    "detector_separation": "d_D, metres (two-detector)",
    "far_field_ratio": "far field requires l >= ratio * max(d_S, d_D)",
    "propagation": "far_field | exact",
    "phi3": "linear analyser angle at detector 3",
    "phi4": "linear analyser angle at detector 4",
    "n_b": "thermal occupation per source (one value or one per source)",
    "orbital_phi": "orbital amplitudes (alpha, beta) of photon 1 (entanglement)",
    "orbital_psi": "orbital amplitudes (alpha', beta') of photon 2 (entanglement)",
    "analyser_a": "Stokes vector of slit A's analyser (three-slit)",
    "analyser_b": "Stokes vector of slit B's analyser (three-slit)",
    "analyser_c": "Stokes vector of slit C's analyser before rotation about analyser_a (three-slit)",
    "oracle": "also evaluate the truncated-Fock oracle",
    "nmax": "oracle photon-number truncation per mode",
    "out": "output CSV path",
}


@dataclass(frozen=True)
class RunConfig:
    experiment: str = "two-detector"
    sweep: str = "phi34"
    sweep_start: float | None = None
    sweep_stop: float | None = None
    sweep_step: float | None = None
    degrees: bool = False
    wavelength: float = 5e-7
    distance: float = 1e5
    source_separation: float = 0.1
    detector_separation: float = 0.0
    far_field_ratio: float = 100.0
    propagation: str = "far_field"
    phi3: float = 0.0
    phi4: float = 0.0
    n_b: tuple[float, ...] = (0.1,)
    orbital_phi: tuple[complex, ...] = (1 + 0j, 0j)
    orbital_psi: tuple[complex, ...] = (1 + 0j, 1 + 0j)
    analyser_a: tuple[float, ...] = (1.0, 0.0, 0.0)
    analyser_b: tuple[float, ...] = (0.0, 1.0, 0.0)
    analyser_c: tuple[float, ...] = (0.0, 0.0, 1.0)
    oracle: bool = False
    nmax: int = 6
    out: str = "sweep.csv"

    def angle(self, value: float) -> float:
        """Convert a configured angle to radians."""
        return math.radians(value) if self.degrees else value

    def sweep_values(self) -> list[float]:
        """Sweep grid ``start + i * step`` for all values below ``stop``."""
        start, stop, step = self.sweep_start, self.sweep_stop, self.sweep_step
        n = math.ceil((stop - start) / step - 1e-9)
        return [start + i * step for i in range(n)]


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_value(name: str, text: str):
    text = text.strip()
    kind = _FIELD_TYPES[name].type
    if kind == "bool":
        return _parse_bool(text)
    if kind == "int":
        return int(text)
    if kind == "str":
        return text
    if kind == "float | None":
        return None if text.lower() in ("", "none") else float(text)
    if kind == "float":
        return float(text)
    if kind == "tuple[float, ...]":
        return tuple(float(x) for x in text.split(","))
    if kind == "tuple[complex, ...]":
        return tuple(complex(x.strip().replace(" ", "")) for x in text.split(","))
    raise AssertionError(f"unhandled field type {kind}")


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, complex):
        return repr(value).strip("()")
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_lines(lines: Iterable[str], source: str = "<config>") -> dict:
    """Parse ``key = value`` lines into a dict of typed values."""
    values = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, text = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _parse_value(key, text)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
    return values


def load_config(path: str | None = None, overrides: Iterable[str] = (), **base) -> RunConfig:
    """Read a config file, apply ``key=value`` overrides and validate."""
    values = dict(base)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(parse_lines(fh, source=path))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    values.update(parse_lines(overrides, source="<override>"))
    return validate(RunConfig(**values))


def _default_range(config: RunConfig) -> tuple[float, float, float]:
    full_turn = 360.0 if config.degrees else 2 * math.pi
    if config.sweep == "phi34":
        return 0.0, full_turn / 2, full_turn / 128
    if config.sweep == "omega":
        return 0.0, 2 * full_turn, full_turn / 32
    if config.sweep == "rotation":
        return 0.0, full_turn, full_turn / 36
    # baseline sweep: two fringe periods of the propagation term
    period = config.wavelength * config.distance / config.source_separation
    return 0.0, 2 * period, period / 32


def validate(config: RunConfig) -> RunConfig:
    """Check invariants and fill in the default sweep range."""
    if config.experiment not in EXPERIMENTS:
        raise ConfigError(f"experiment: expected one of {EXPERIMENTS}, got {config.experiment!r}")
    if config.sweep not in SWEEPS[config.experiment]:
        raise ConfigError(
            f"sweep: {config.sweep!r} is not valid for {config.experiment} "
            f"(choose from {SWEEPS[config.experiment]})"
        )
    if config.propagation not in ("far_field", "exact"):
        raise ConfigError(f"propagation: expected far_field or exact, got {config.propagation!r}")
    for name in ("wavelength", "distance"):
        if not getattr(config, name) > 0:
            raise ConfigError(f"{name}: must be > 0")
    for name in ("source_separation", "detector_separation"):
        if getattr(config, name) < 0:
            raise ConfigError(f"{name}: must be >= 0")
    if any(n < 0 for n in config.n_b):
        raise ConfigError("n_b: occupations must be >= 0")
    if config.nmax < 1:
        raise ConfigError("nmax: must be >= 1")
    for name in ("orbital_phi", "orbital_psi"):
        amps = getattr(config, name)
        if len(amps) != 2 or not any(amps):
            raise ConfigError(f"{name}: expected two amplitudes, not both zero")
    for name in ("analyser_a", "analyser_b", "analyser_c"):
        vec = getattr(config, name)
        if len(vec) != 3 or not any(vec):
            raise ConfigError(f"{name}: expected a nonzero 3-vector")

    start, stop, step = _default_range(config)
    config = dataclasses.replace(
        config,
        sweep_start=start if config.sweep_start is None else config.sweep_start,
        sweep_stop=stop if config.sweep_stop is None else config.sweep_stop,
        sweep_step=step if config.sweep_step is None else config.sweep_step,
    )
    if not config.sweep_step > 0:
        raise ConfigError("sweep_step: must be > 0")
    if not config.sweep_stop > config.sweep_start:
        raise ConfigError(
            f"sweep range is empty: sweep_start={config.sweep_start!r} >= sweep_stop={config.sweep_stop!r}"
        )
    return config


def dump_config(config: RunConfig) -> str:
    """Serialise to the flat format; :func:`parse_lines` reads it back unchanged."""
    lines = ["# hbtphase run configuration"]
    for f in fields(RunConfig):
        lines.append(f"{f.name} = {_format_value(getattr(config, f.name))}")
    return "\n".join(lines) + "\n"
