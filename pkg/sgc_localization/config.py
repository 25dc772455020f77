"""Run configuration: a line-oriented ``key = value`` document resolved on top of a figure preset.

Resolution order is defaults, then the preset, then document fields, then explicit overrides.
"""
from dataclasses import dataclass
from typing import Any

from sgc_localization.configs.figures import get_base_settings, get_figure_settings
from sgc_localization.data import FigurePreset, OutputKind
from sgc_localization.dynamics import InvalidParameters, SystemParams
from sgc_localization.field import GridSpec, StandingWaveSpec
from sgc_localization.util import parse_angle

PARAM_KEYS = ("gamma1", "gamma2", "omega_p", "delta_p", "delta_c", "theta")
WAVE_KEYS = ("omega0", "kappa1", "kappa2", "delta_phase", "eta_phase")
GRID_KEYS = ("x_min", "x_max", "y_min", "y_max", "nx", "ny")
ANGLE_KEYS = {"theta", "delta_phase", "eta_phase"}
INT_KEYS = {"nx", "ny"}
KEYS = ("preset", *PARAM_KEYS, *WAVE_KEYS, *GRID_KEYS, "outputs")


class ConfigError(Exception):
    """Base class for configuration errors."""


class ParseError(ConfigError):
    """Raised when a line of a configuration document cannot be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"Line {line}: {message}")
        self.line = line


class UnknownKey(ConfigError):
    """Raised when a configuration document names a key that does not exist."""

    def __init__(self, line: int, key: str):
        super().__init__(f"Line {line}: unknown key '{key}'.")
        self.line = line
        self.key = key


class RangeError(ConfigError):
    """Raised when a resolved configuration value is outside its valid range."""


@dataclass(frozen=True)
class RunConfig:
    base: SystemParams
    wave: StandingWaveSpec
    grid: GridSpec
    outputs: tuple[OutputKind, ...]
    preset: FigurePreset | None = None


def _parse_outputs(text: str) -> tuple[OutputKind, ...]:
    names = [name.strip().lower() for name in text.split(",") if name.strip()]
    if not names:
        raise ValueError("at least one output kind is required")
    return tuple(OutputKind(name) for name in names)


def _convert(key: str, text: str) -> Any:
    if key in ANGLE_KEYS:
        return parse_angle(text)
    if key in INT_KEYS:
        return int(text)
    if key == "outputs":
        return _parse_outputs(text)
    return float(text)


def _read_fields(text: str) -> tuple[dict[str, Any], dict[str, int]]:
    """Return raw key -> value text and key -> line number of a document."""
    fields, lines = {}, {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key:
            raise ParseError(number, f"expected 'key = value', got '{raw.strip()}'.")
        if key not in KEYS:
            raise UnknownKey(number, key)
        if key in fields:
            raise ParseError(number, f"duplicate key '{key}', first set on line {lines[key]}.")
        if not value:
            raise ParseError(number, f"missing value for '{key}'.")
        fields[key], lines[key] = value, number
    return fields, lines


def parse_config(
    text: str = "", preset: FigurePreset | str | None = None, overrides: dict[str, Any] | None = None
) -> RunConfig:
    """Parse a configuration document into a resolved RunConfig.

    Angles accept pi literals such as ``0.5pi`` or ``pi/1.7``; ``outputs`` is a comma list of
    csv, heatmap, peaks and audit.

    :param text: Document text; empty means all defaults.
    :param preset: Preset that replaces any ``preset`` line of the document.
    :param overrides: Already typed values applied after the document fields.
    :raises ParseError: Malformed line or value.
    :raises UnknownKey: The document names a key that does not exist.
    :raises RangeError: A resolved value is out of range, e.g. an even grid count or omega_p = 0.
    """
    fields, lines = _read_fields(text)

    preset_name = preset if preset is not None else fields.pop("preset", None)
    fields.pop("preset", None)
    settings = get_base_settings()
    resolved_preset = None
    if preset_name is not None:
        try:
            resolved_preset = FigurePreset(preset_name)
        except ValueError as err:
            where = f"Line {lines['preset']}: " if "preset" in lines and preset is None else ""
            raise RangeError(f"{where}unknown preset '{preset_name}'.") from err
        settings.update(get_figure_settings(resolved_preset))

    for key, value in fields.items():
        try:
            settings[key] = _convert(key, value)
        except ValueError as err:
            raise ParseError(lines[key], f"invalid value '{value}' for '{key}': {err}") from err
    settings.update(overrides or {})

    try:
        config = RunConfig(
            base=SystemParams(**{key: float(settings[key]) for key in PARAM_KEYS}),
            wave=StandingWaveSpec(**{key: float(settings[key]) for key in WAVE_KEYS}),
            grid=GridSpec(**{key: settings[key] for key in GRID_KEYS}),
            outputs=tuple(OutputKind(kind) for kind in settings["outputs"]),
            preset=resolved_preset,
        )
    except (InvalidParameters, ValueError) as err:
        raise RangeError(str(err)) from err
    if config.base.omega_p <= 0:
        raise RangeError(f"A run needs omega_p > 0, got {config.base.omega_p}.")
    if not config.outputs:
        raise RangeError("A run needs at least one output kind.")
    return config


def format_config(config: RunConfig) -> str:
    """Return the resolved configuration as a document that parses back to the same values."""
    lines = [f"# resolved from preset {config.preset.value}" if config.preset else "# resolved from defaults"]
    for key in PARAM_KEYS:
        lines.append(f"{key} = {getattr(config.base, key)!r}")
    for key in WAVE_KEYS:
        lines.append(f"{key} = {getattr(config.wave, key)!r}")
    for key in GRID_KEYS:
        lines.append(f"{key} = {getattr(config.grid, key)!r}")
    lines.append(f"outputs = {','.join(kind.value for kind in config.outputs)}")
    return "\n".join(lines) + "\n"
