"""Figure presets for the V-type localization scheme."""
import math
from typing import Any

from sgc_localization.data import FigurePreset


def get_base_settings() -> dict[str, Any]:
    """Return the settings shared by every figure preset, which are also the defaults of a run.

    All rates and detunings are in units of gamma, positions in units of lambda, wave vectors in units of 2 pi / lambda.

    :return: Dictionary keyed by configuration key.
    :rtype: Dict[str, Any]
    """
    return {
        "gamma1": 1.0,
        "gamma2": 1.0,
        "omega_p": 0.01,
        "delta_p": 0.0,
        "delta_c": 0.0,
        "theta": 0.5 * math.pi,  # Orthogonal dipoles, no SGC.
        "omega0": 10.0,
        "kappa1": 1.0,
        "kappa2": 1.0,
        "delta_phase": 0.0,
        "eta_phase": 0.0,
        "x_min": -0.5,
        "x_max": 0.5,
        "y_min": -0.5,
        "y_max": 0.5,
        "nx": 201,
        "ny": 201,
        "outputs": ("csv", "heatmap", "peaks"),
    }


def get_probe_detuning_settings(delta_p: float) -> dict[str, Any]:
    """Return settings of the probe-detuning sweep at resonant coupling."""
    settings = get_base_settings()
    settings["delta_p"] = delta_p
    return settings


def get_coupling_detuning_settings(delta_c: float) -> dict[str, Any]:
    """Return settings of the coupling-detuning sweep at a probe detuning of 20."""
    settings = get_base_settings()
    settings["delta_p"] = 20.0
    settings["delta_c"] = delta_c
    return settings


def get_sgc_settings(theta: float) -> dict[str, Any]:
    """Return settings of the dipole-angle sweep at a probe detuning of 30."""
    settings = get_base_settings()
    settings["delta_p"] = 30.0
    settings["theta"] = theta
    return settings


def get_figure_settings(preset: FigurePreset | str) -> dict[str, Any]:
    """Return the settings of a shipped preset.

    :param preset: Preset or its name, e.g. "fig2c".
    :raises ValueError: Unknown preset name.
    """
    factories = {
        FigurePreset.FIG2A: lambda: get_probe_detuning_settings(0.0),
        FigurePreset.FIG2B: lambda: get_probe_detuning_settings(20.0),
        FigurePreset.FIG2C: lambda: get_probe_detuning_settings(30.0),
        FigurePreset.FIG2D: lambda: get_probe_detuning_settings(40.0),
        FigurePreset.FIG4A: lambda: get_coupling_detuning_settings(8.0),
        FigurePreset.FIG4B: lambda: get_coupling_detuning_settings(12.0),
        FigurePreset.FIG4C: lambda: get_coupling_detuning_settings(15.0),
        FigurePreset.FIG4D: lambda: get_coupling_detuning_settings(20.0),
        FigurePreset.FIG6A: lambda: get_sgc_settings(math.pi / 1.99),
        FigurePreset.FIG6B: lambda: get_sgc_settings(math.pi / 1.9),
        FigurePreset.FIG6C: lambda: get_sgc_settings(math.pi / 1.8),
        FigurePreset.FIG6D: lambda: get_sgc_settings(math.pi / 1.7),
    }
    return factories[FigurePreset(preset)]()
