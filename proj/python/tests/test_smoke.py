import math

import numpy as np
import pytest

import clutterchan as cc


MICRO = """[geometry]
kind = midstreet
d1_m = 12.5
d2_m = 12.5
carrier_frequency_hz = 140e9

[params]
preset = microcellular_8m

[grid]
n_time = 300

[run]
seed = 5
"""


def test_geometry_closed_forms():
    lam = cc.wavelength(140e9)
    assert lam == pytest.approx(2.1414e-3, rel=1e-4)
    assert cc.mean_power_midstreet(12.5, 12.5, lam) == pytest.approx(9.293e-11, rel=1e-4)
    assert cc.mean_power_intersection(9.0, lam) == pytest.approx(6.514e-11, rel=1e-4)
    geom = cc.ScenarioGeometry.midstreet(7.0, 18.0, 140e9)
    assert cc.mean_power_numeric(geom, 10000) == pytest.approx(cc.mean_power_geometry(geom), rel=1e-6)


def test_errors_map_to_python_exceptions():
    with pytest.raises(cc.InvalidInput):
        cc.wavelength(-1.0)
    with pytest.raises(ValueError):
        cc.wavelength(0.0)
    geom = cc.ScenarioGeometry.midstreet(12.5, 12.5, 140e9)
    with pytest.raises(cc.SingularityError):
        cc.directional_distance(geom, math.pi / 2)
    with pytest.raises(cc.ModelValidityError):
        cc.synthesize(geom, cc.table1_preset("microcellular_8m"), cc.GridSpec(0.0, 10, 0.5, 10, 0.6), 1)


def test_profile_and_fluctuation():
    params = cc.table1_preset("microcellular_8m")
    assert params.sigma_p_db == 5.3
    assert cc.mu_p_from_sigma(5.3) == pytest.approx(-3.234, abs=5e-4)
    prof = cc.sample_profile(params, 20000, 1.0, 3)
    assert set(prof) >= {"azimuth_deg", "p_db", "k_db", "psi_rad"}
    assert np.corrcoef(prof["p_db"], prof["k_db"])[0, 1] == pytest.approx(0.73, abs=0.03)

    h = np.asarray(cc.sample_fluctuation(10.0, 0.0, 100000, 4))
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, abs=0.02)
    assert cc.k_moment_estimate(np.abs(h) ** 2) == pytest.approx(10.0, abs=0.3)
    assert cc.k_moment_estimate(np.full(16, 5.0)) == math.inf


def test_synthesize_and_roundtrip():
    geom = cc.ScenarioGeometry.midstreet(12.5, 12.5, 140e9)
    params = cc.table1_preset("microcellular_8m")
    grid = cc.synthesize(geom, params, cc.GridSpec(-75.0, 150, 1.0, 400, 0.6), 1)
    h = np.asarray(grid.h)
    assert h.shape == (150, 400)
    assert grid.p0 == pytest.approx(9.293e-11, rel=1e-4)
    powers = np.asarray(cc.power_grid(grid))
    assert np.allclose(powers, np.abs(h) ** 2)

    again = cc.synthesize(geom, params, cc.GridSpec(-75.0, 150, 1.0, 400, 0.6), 1)
    assert np.array_equal(np.asarray(again.h), h)

    report = cc.roundtrip(powers, 0.6, False)
    assert report["n_azimuth"] == 150
    assert abs(report["sigma_p_hat"] - 5.3) < 1.0
    assert abs(report["rho_pk_hat"] - 0.73) < 0.15


def test_config_and_validate():
    text = cc.normalize_config(MICRO)
    assert "preset = microcellular_8m" in text
    assert cc.normalize_config(text) == text
    with pytest.raises(cc.ConfigError):
        cc.normalize_config(MICRO.replace("d1_m = 12.5", "d1_m = -1"))

    result = cc.validate(MICRO.replace("n_time = 300", "n_time = 1000"))
    assert {c["name"] for c in result["checks"]} == {"sigma_p_db", "mu_k_db", "sigma_k_db", "rho_pk"}
    assert isinstance(result["passed"], bool)


def test_antenna_delta_identity():
    geom = cc.ScenarioGeometry.midstreet(12.5, 12.5, 140e9)
    grid = cc.synthesize(geom, cc.table1_preset("street_level_1m"), cc.GridSpec(-75.0, 150, 1.0, 5, 0.6), 2)
    gains = np.zeros(360, dtype=complex)
    gains[0] = 1.0
    out = cc.apply_antenna(grid, cc.AntennaPattern(1.0, gains))
    assert np.array_equal(np.asarray(out.h), np.asarray(grid.h))
