"""Monostatic backscatter clutter channels for urban street canyons.

Thin Python layer over the C++ core: geometry averages, the stochastic
azimuth profile, Rician temporal fluctuation, grid synthesis and the
estimation chain that recovers model statistics from a power grid.
"""

import json

from ._core import (
    AntennaPattern,
    ChannelGrid,
    ClutterError,
    ConfigError,
    DegenerateError,
    GridSpec,
    InvalidInput,
    IoError,
    ModelValidityError,
    ProfileParams,
    ScenarioGeometry,
    SingularityError,
    apply_antenna,
    autocorrelation,
    cdf_quantile_distance_db,
    directional_distance,
    k_moment_estimate,
    mean_power,
    mean_power_geometry,
    mean_power_intersection,
    mean_power_midstreet,
    mean_power_numeric,
    mu_p_from_sigma,
    pearson_correlation,
    power_grid,
    power_grid_db,
    read_grid,
    relative_azimuth_power,
    sample_fluctuation,
    sample_profile,
    synthesize,
    table1_preset,
    temporal_fluctuation,
    wavelength,
)
from . import _core


def roundtrip(powers, dt_s=0.6, rician_check=True):
    """Estimation report for an azimuth x time power grid, as a dict."""
    return json.loads(_core._roundtrip_json(powers, dt_s, rician_check))


def normalize_config(text):
    """Parses a scenario config and returns its canonical text."""
    return _core._normalize_config(text)


def validate(config_text):
    """Synthesize, re-estimate and compare; returns the validation summary."""
    return json.loads(_core._validate_json(config_text))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
