#!/usr/bin/env python3
"""Regenerate the bundled weather CSVs and scenario JSON files.

All values are order-of-magnitude-plausible synthetics (documented as such
in the scenario descriptions); rerunning is deterministic.
"""

import json
import math
from pathlib import Path

DATA = Path(__file__).resolve().parents[1] / "src" / "thermoenv" / "data"

# Hot-dry desert climate, January through April, hourly.
TUCSON_GROUND = [12.8, 14.5, 17.1, 20.7, 24.9, 28.6, 30.5, 30.1, 27.7, 23.5, 18.7, 14.6]


def hot_dry_weather(hours: int = 2905) -> list[tuple[float, float, float]]:
    # warm desert spring: mild nights, hot afternoons, strong clear-sky solar
    rows = []
    for k in range(hours):
        day = k / 24.0
        hour = k % 24
        seasonal = 22.0 + 6.0 * (day / 120.0)
        diurnal = 8.5 * math.sin(math.pi * (hour - 7.0) / 12.0) if 7 <= hour <= 19 else (
            -4.5 + 0.5 * math.cos(2 * math.pi * hour / 24.0)
        )
        wobble = 2.0 * math.sin(2 * math.pi * day / 9.0)
        te = seasonal + diurnal + wobble
        peak = 560.0 + 320.0 * (day / 120.0)
        ghi = peak * math.sin(math.pi * (hour - 6.0) / 12.0) if 6 < hour < 18 else 0.0
        rows.append((k * 3600.0, round(te, 3), round(max(ghi, 0.0), 1)))
    return rows


def constant_weather(hours: int = 1200, temp: float = 20.0) -> list[tuple[float, float, float]]:
    return [(k * 3600.0, temp, 0.0) for k in range(hours)]


def write_weather(name: str, rows) -> None:
    path = DATA / "weather" / name
    with open(path, "w") as fh:
        fh.write("t_seconds,outdoor_c,ghi_wm2\n")
        for t, te, ghi in rows:
            fh.write(f"{t:.1f},{te},{ghi}\n")
    print(f"wrote {path} ({len(rows)} rows)")


def write_scenario(name: str, doc: dict) -> None:
    path = DATA / "scenarios" / f"{name}.json"
    path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {path}")


def single_zone_box() -> dict:
    return {
        "name": "single-zone-box",
        "description": "One conditioned box with an exterior wall and a window; "
                       "synthetic parameters for controller smoke tests.",
        "building": {
            "zones": [
                {"id": 1, "volume": 300.0, "window_area": 8.0, "is_perimeter": True}
            ],
            "exterior_walls": [{"zone": 1, "area": 120.0, "u_factor": 0.45}],
        },
        "weather_file": "tucson-hot-dry.csv",
        "ground_temps": TUCSON_GROUND,
        "capacitance_scale": 12.0,
        "episode_length": 720,
        "max_power": 12000.0,
    }


def two_zone_fig2() -> dict:
    # inner zone 1 is fully enclosed by zone 2: no exterior wall, ground only
    return {
        "name": "two-zone-fig2",
        "description": "Pedagogical two-zone, one-story building: zone 1 sits "
                       "entirely inside zone 2, so only zone 2 touches outdoor "
                       "air. Synthetic parameters.",
        "building": {
            "zones": [
                {"id": 1, "volume": 150.0, "window_area": 0.0,
                 "is_ground_floor": True, "is_perimeter": False},
                {"id": 2, "volume": 350.0, "window_area": 12.0,
                 "is_ground_floor": True, "is_perimeter": True},
            ],
            "adjacency": [{"zones": [1, 2], "area": 40.0, "u_factor": 2.0}],
            "exterior_walls": [{"zone": 2, "area": 90.0, "u_factor": 0.5}],
            "ground_contact": [
                {"zone": 1, "area": 50.0, "u_factor": 1.0},
                {"zone": 2, "area": 80.0, "u_factor": 1.0},
            ],
        },
        "weather_file": "tucson-hot-dry.csv",
        "ground_temps": TUCSON_GROUND,
        "capacitance_scale": 10.0,
        "episode_length": 720,
    }


def two_zone_constant() -> dict:
    doc = two_zone_fig2()
    doc.update({
        "name": "two-zone-constant",
        "description": "The two-zone building under constant 20 C weather with "
                       "zero irradiance and unit ground weight: an exact "
                       "equilibrium fixture for tests and protocol demos.",
        "weather_file": "constant-20c.csv",
        "ground_temps": [20.0] * 12,
        "ground_weight": 1.0,
        "target_temps": 20.0,
        "episode_length": 1100,
    })
    return doc


def single_story_5zone() -> dict:
    # four perimeter zones around one core, all on grade
    zones = []
    for zid, (name, vol, win) in enumerate(
        [("north", 700.0, 20.0), ("east", 450.0, 14.0), ("south", 700.0, 20.0),
         ("west", 450.0, 14.0), ("core", 1400.0, 0.0)],
        start=1,
    ):
        zones.append({
            "id": zid,
            "volume": vol,
            "window_area": win,
            "is_ground_floor": True,
            "is_perimeter": name != "core",
        })
    adjacency = [
        {"zones": [1, 5], "area": 70.0, "u_factor": 2.5},
        {"zones": [2, 5], "area": 45.0, "u_factor": 2.5},
        {"zones": [3, 5], "area": 70.0, "u_factor": 2.5},
        {"zones": [4, 5], "area": 45.0, "u_factor": 2.5},
        {"zones": [1, 2], "area": 18.0, "u_factor": 2.5},
        {"zones": [2, 3], "area": 18.0, "u_factor": 2.5},
        {"zones": [3, 4], "area": 18.0, "u_factor": 2.5},
        {"zones": [4, 1], "area": 18.0, "u_factor": 2.5},
    ]
    exterior = [
        {"zone": 1, "area": 95.0, "u_factor": 0.5},
        {"zone": 2, "area": 62.0, "u_factor": 0.5},
        {"zone": 3, "area": 95.0, "u_factor": 0.5},
        {"zone": 4, "area": 62.0, "u_factor": 0.5},
    ]
    ground = [
        {"zone": 1, "area": 230.0, "u_factor": 0.8},
        {"zone": 2, "area": 150.0, "u_factor": 0.8},
        {"zone": 3, "area": 230.0, "u_factor": 0.8},
        {"zone": 4, "area": 150.0, "u_factor": 0.8},
        {"zone": 5, "area": 460.0, "u_factor": 0.8},
    ]
    return {
        "name": "single-story-5zone",
        "description": "Rectangular single-story building: four perimeter "
                       "zones around a core, all conditioned and occupied. "
                       "Synthetic parameters.",
        "building": {
            "zones": zones,
            "adjacency": adjacency,
            "exterior_walls": exterior,
            "ground_contact": ground,
        },
        "weather_file": "tucson-hot-dry.csv",
        "ground_temps": TUCSON_GROUND,
        "occupancy": [8.0, 5.0, 8.0, 5.0, 12.0],
        "capacitance_scale": 12.0,
        "episode_length": 720,
    }


def medium_office_18zone() -> dict:
    # three floors: per floor four perimeter zones, one core, one plenum
    zones, adjacency, exterior, ground = [], [], [], []
    ac_map = []
    per_volumes = {"north": 720.0, "east": 470.0, "south": 720.0, "west": 470.0}
    per_windows = {"north": 22.0, "east": 14.0, "south": 22.0, "west": 14.0}
    for floor in range(3):
        base = 6 * floor
        names = ["north", "east", "south", "west"]
        for i, nm in enumerate(names, start=1):
            zones.append({
                "id": base + i,
                "volume": per_volumes[nm],
                "window_area": per_windows[nm],
                "is_ground_floor": floor == 0,
                "is_perimeter": True,
            })
            ac_map.append(True)
        zones.append({  # core
            "id": base + 5,
            "volume": 2250.0,
            "window_area": 0.0,
            "is_ground_floor": floor == 0,
            "is_perimeter": False,
        })
        ac_map.append(False)
        zones.append({  # plenum above the ceiling; the top one sees the roof
            "id": base + 6,
            "volume": 1150.0,
            "window_area": 0.0,
            "is_ground_floor": False,
            "is_perimeter": floor == 2,
        })
        ac_map.append(False)

        core = base + 5
        plenum = base + 6
        ring = [base + 1, base + 2, base + 3, base + 4]
        for i, z in enumerate(ring):
            adjacency.append({"zones": [z, core], "area": 78.0, "u_factor": 2.5})
            adjacency.append({"zones": [z, ring[(i + 1) % 4]], "area": 20.0, "u_factor": 2.5})
            adjacency.append({"zones": [z, plenum], "area": 180.0, "u_factor": 1.8})
            exterior.append({
                "zone": z,
                "area": 96.0 if z % 6 in (1, 3) else 64.0,
                "u_factor": 0.48,
            })
        adjacency.append({"zones": [core, plenum], "area": 560.0, "u_factor": 1.8})
        if floor > 0:
            below_plenum = base - 6 + 6
            for z in ring + [core]:
                adjacency.append({"zones": [below_plenum, z], "area": 170.0 if z != core else 560.0,
                                  "u_factor": 1.2})
    ground = [
        {"zone": 1, "area": 240.0, "u_factor": 0.7},
        {"zone": 2, "area": 160.0, "u_factor": 0.7},
        {"zone": 3, "area": 240.0, "u_factor": 0.7},
        {"zone": 4, "area": 160.0, "u_factor": 0.7},
        {"zone": 5, "area": 560.0, "u_factor": 0.7},
    ]
    exterior.append({"zone": 18, "area": 1360.0, "u_factor": 0.35})  # roof on top plenum
    return {
        "name": "medium-office-18zone",
        "description": "Three-story medium office: each floor splits into "
                       "four perimeter zones, one core zone, and one plenum. "
                       "HVAC serves perimeter zones only. Synthetic parameters "
                       "(not calibrated to any published building).",
        "building": {
            "zones": zones,
            "adjacency": adjacency,
            "exterior_walls": exterior,
            "ground_contact": ground,
        },
        "weather_file": "tucson-hot-dry.csv",
        "ground_temps": TUCSON_GROUND,
        "ac_map": ac_map,
        "capacitance_scale": 8.0,
        "max_power": 3000.0,
        "shgc_weight": 0.5,
        "episode_length": 720,
        "operating_hours": [8, 15],
    }


def main() -> None:
    (DATA / "weather").mkdir(parents=True, exist_ok=True)
    (DATA / "scenarios").mkdir(parents=True, exist_ok=True)
    write_weather("tucson-hot-dry.csv", hot_dry_weather())
    write_weather("constant-20c.csv", constant_weather())
    for build in (single_zone_box, two_zone_fig2, two_zone_constant,
                  single_story_5zone, medium_office_18zone):
        doc = build()
        write_scenario(doc["name"], doc)


if __name__ == "__main__":
    main()
