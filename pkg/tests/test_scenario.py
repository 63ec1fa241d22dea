import json

import numpy as np
import pytest

from thermoenv import (
    ConfigurationError,
    bundled_scenarios,
    load_scenario,
    load_weather,
)
from thermoenv.core import from_json, to_json
from thermoenv.scenario import find_scenario


MINIMAL = {
    "building": {
        "zones": [
            {"id": 1, "volume": 200.0, "is_perimeter": True, "window_area": 5.0},
        ],
        "exterior_walls": [{"zone": 1, "area": 80.0, "u_factor": 0.5}],
    },
    "weather_file": "constant-20c.csv",
    "ground_temps": [10.0] * 12,
}


def write_scenario(tmp_path, doc, name="test.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


class TestLoadScenario:
    def test_minimal_file_gets_documented_defaults(self, tmp_path):
        s = load_scenario(write_scenario(tmp_path, MINIMAL))
        assert s.solar.shgc == 0.252
        assert s.solar.shgc_weight == 0.1
        assert s.solar.ground_weight == 0.5
        assert s.env_config.max_power == 8000.0
        assert s.env_config.reward.target_temps == (22.0,)
        assert s.env_config.discrete_model.dt == 3600.0
        assert s.env_config.occupancy == (0.0,)
        assert s.env_config.ac_map == (True,)
        assert s.env_config.activity_schedule[0] == 120.0
        assert s.operating_hours == (8, 15)

    def test_unknown_field_rejected_by_name(self, tmp_path):
        doc = dict(MINIMAL, max_powr=5000.0)
        with pytest.raises(ConfigurationError, match="max_powr"):
            load_scenario(write_scenario(tmp_path, doc))

    def test_missing_required_fields_listed(self, tmp_path):
        doc = {"building": MINIMAL["building"]}
        with pytest.raises(ConfigurationError, match="weather_file, ground_temps"):
            load_scenario(write_scenario(tmp_path, doc))

    def test_bad_adjacency_zone_named(self, tmp_path):
        doc = json.loads(json.dumps(MINIMAL))
        doc["building"]["zones"].append({"id": 2, "volume": 100.0})
        doc["building"]["adjacency"] = [{"zones": [1, 99], "area": 10.0, "u_factor": 1.0}]
        with pytest.raises(ConfigurationError, match="99"):
            load_scenario(write_scenario(tmp_path, doc))

    def test_time_resolution_must_match_weather(self, tmp_path):
        doc = dict(MINIMAL, time_resolution_s=1800.0)
        with pytest.raises(ConfigurationError, match="time_resolution"):
            load_scenario(write_scenario(tmp_path, doc))

    def test_scenario_dir_env_lookup(self, tmp_path, monkeypatch):
        write_scenario(tmp_path, MINIMAL, name="custom-box.json")
        monkeypatch.setenv("THERMOENV_SCENARIO_DIR", str(tmp_path))
        s = load_scenario("custom-box")
        assert s.name == "custom-box"

    def test_capacitance_override(self, tmp_path):
        doc = dict(MINIMAL, capacitance=[5.0e6])
        s = load_scenario(write_scenario(tmp_path, doc))
        assert s.thermal.capacitance[0] == 5.0e6
        doc = dict(MINIMAL, capacitance_scale=3.0)
        s2 = load_scenario(write_scenario(tmp_path, doc))
        assert s2.thermal.capacitance[0] == pytest.approx(200.0 * 1206.0 * 3.0)


class TestLoadWeather:
    def test_row_count(self, tmp_path):
        p = tmp_path / "w.csv"
        lines = ["t_seconds,outdoor_c,ghi_wm2"]
        lines += [f"{k * 3600.0},20.0,0.0" for k in range(96)]
        p.write_text("\n".join(lines) + "\n")
        w = load_weather(p)
        assert len(w) == 96

    def test_negative_ghi_rejected_with_row(self, tmp_path):
        p = tmp_path / "w.csv"
        p.write_text(
            "t_seconds,outdoor_c,ghi_wm2\n0.0,20.0,0.0\n3600.0,20.0,-3.0\n"
        )
        with pytest.raises(ConfigurationError, match="row 3"):
            load_weather(p)

    def test_non_uniform_spacing_rejected(self, tmp_path):
        p = tmp_path / "w.csv"
        p.write_text(
            "t_seconds,outdoor_c,ghi_wm2\n0.0,20.0,0.0\n3600.0,20.0,0.0\n7300.0,20.0,0.0\n"
        )
        with pytest.raises(ConfigurationError, match="non-uniform"):
            load_weather(p)

    def test_bad_header_rejected(self, tmp_path):
        p = tmp_path / "w.csv"
        p.write_text("time,temp,sun\n0,20,0\n")
        with pytest.raises(ConfigurationError, match="header"):
            load_weather(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="not found"):
            load_weather(tmp_path / "nope.csv")


class TestBundledScenarios:
    def test_required_set_present(self):
        names = bundled_scenarios()
        assert "single-story-5zone" in names
        assert "medium-office-18zone" in names
        assert "two-zone-fig2" in names
        assert len(names) >= 2

    def test_all_bundled_scenarios_load_and_validate(self):
        for name in bundled_scenarios():
            s = load_scenario(name)
            assert s.env_config.episode_length >= 1
            # every loaded artifact survives a serialization round trip
            for obj in (s.topology, s.thermal, s.solar, s.occupant_coeffs,
                        s.env_config.discrete_model, s.env_config.weather):
                clone = from_json(type(obj), to_json(obj))
                assert clone.to_dict() == obj.to_dict()

    def test_medium_office_shape(self):
        s = load_scenario("medium-office-18zone")
        assert s.topology.zone_count == 18
        # HVAC on the twelve perimeter zones only
        assert s.env_config.n_hvac == 12
        for z in s.topology.zones:
            if z.id % 6 in (1, 2, 3, 4):
                assert z.hvac_present
            else:
                assert not z.hvac_present

    def test_five_zone_shape(self):
        s = load_scenario("single-story-5zone")
        assert s.topology.zone_count == 5
        perimeter = [z for z in s.topology.zones if z.is_perimeter]
        assert len(perimeter) == 4

    def test_two_zone_inner_zone_has_no_exterior(self):
        s = load_scenario("two-zone-fig2")
        exterior_zones = {w.zone for w in s.topology.exterior_walls}
        assert exterior_zones == {2}
        assert 1 in s.thermal.resistance_ground

    def test_find_scenario_error_lists_bundled(self):
        with pytest.raises(ConfigurationError, match="two-zone-fig2"):
            find_scenario("no-such-scenario")
