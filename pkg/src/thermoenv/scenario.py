"""Scenario and weather file loading, plus the bundled reference scenarios.

A scenario is a single JSON document naming the building topology, a weather
CSV, the 12 monthly ground temperatures, and the simulation knobs (targets,
sample time, solar factors, occupancy, HVAC map, power limit). Omitted knobs
fall back to the documented defaults. Unknown fields are rejected by name so
typos fail loudly.

Weather CSV format: header ``t_seconds,outdoor_c,ghi_wm2``, uniform spacing
equal to the scenario's sample time.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

import numpy as np

from .constants import default_occupant_coefficients
from .core import (
    BoundarySurface,
    BuildingTopology,
    ConfigurationError,
    OccupantHeatCoefficients,
    RewardConfig,
    SharedWall,
    SolarParameters,
    ThermalParameters,
    WeatherSeries,
    ZoneSpec,
)
from .discretize import discretize
from .dynamics import assemble_continuous, derive_thermal_parameters
from .environment import EnvConfig

__all__ = [
    "Scenario",
    "load_weather",
    "load_scenario",
    "bundled_scenarios",
    "find_scenario",
    "SCENARIO_DIR_ENV",
]

SCENARIO_DIR_ENV = "THERMOENV_SCENARIO_DIR"

DEFAULTS = {
    "target_temps": 22.0,
    "time_resolution_s": 3600.0,
    "beta": 0.999,
    "shgc": 0.252,
    "shgc_weight": 0.1,
    "ground_weight": 0.5,
    "occupancy": 0.0,
    "activity_schedule": 120.0,
    "max_power": 8000.0,
    "start_month": 1,
    "operating_hours": (8, 15),
}

_TOP_KEYS = {
    "name",
    "description",
    "building",
    "weather_file",
    "ground_temps",
    "target_temps",
    "time_resolution_s",
    "beta",
    "shgc",
    "shgc_weight",
    "ground_weight",
    "occupancy",
    "activity_schedule",
    "ac_map",
    "max_power",
    "episode_length",
    "initial_temps",
    "state_bounds",
    "start_month",
    "operating_hours",
    "u_factors",
    "capacitance",
    "capacitance_scale",
    "resistance",
    "occupant_coefficients",
    "metabolic_rate",
}
_BUILDING_KEYS = {"zones", "adjacency", "exterior_walls", "ground_contact"}
_ZONE_KEYS = {
    "id",
    "volume",
    "window_area",
    "is_ground_floor",
    "is_perimeter",
    "hvac_efficiency",
}
_REQUIRED = ("building", "weather_file", "ground_temps")


@dataclass(frozen=True, eq=False)
class Scenario:
    """A fully resolved scenario: raw descriptions plus the ready EnvConfig."""

    name: str
    description: str
    topology: BuildingTopology
    thermal: ThermalParameters
    solar: SolarParameters
    occupant_coeffs: OccupantHeatCoefficients
    env_config: EnvConfig
    operating_hours: tuple[int, int]
    path: str = ""


def _reject_unknown(d: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise ConfigurationError(f"unknown field(s) in {where}: {', '.join(unknown)}")


def load_weather(path, ground_temp=None) -> WeatherSeries:
    """Read a weather CSV. ``ground_temp`` carries the 12 monthly values
    kept in the scenario file; omitted, they default to zeros."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"weather file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["t_seconds", "outdoor_c", "ghi_wm2"]:
            raise ConfigurationError(
                f"{path}: expected header t_seconds,outdoor_c,ghi_wm2, got {header}"
            )
        ts, te, gh = [], [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t, o, g = float(row[0]), float(row[1]), float(row[2])
            except (ValueError, IndexError) as exc:
                raise ConfigurationError(f"{path}: bad row {lineno}: {row}") from exc
            if g < 0:
                raise ConfigurationError(f"{path}: negative ghi at row {lineno}")
            ts.append(t)
            te.append(o)
            gh.append(g)
    if not ts:
        raise ConfigurationError(f"{path}: no data rows")
    if ground_temp is None:
        ground_temp = (0.0,) * 12
    return WeatherSeries(
        timestamps=np.array(ts),
        outdoor_temp=np.array(te),
        ghi=np.array(gh),
        ground_temp=tuple(ground_temp),
    )


def _per_zone(value, m: int, name: str) -> list:
    if isinstance(value, (int, float, bool)):
        return [value] * m
    value = list(value)
    if len(value) != m:
        raise ConfigurationError(f"{name} needs {m} entries (one per zone), got {len(value)}")
    return value


def _build_topology(doc: dict, m_occupancy, ac_map) -> BuildingTopology:
    _reject_unknown(doc, _BUILDING_KEYS, "building")
    if "zones" not in doc or not doc["zones"]:
        raise ConfigurationError("building.zones is required and must be non-empty")
    m = len(doc["zones"])
    occ = _per_zone(m_occupancy, m, "occupancy")
    ac = _per_zone(ac_map, m, "ac_map")
    zones = []
    for idx, z in enumerate(doc["zones"]):
        _reject_unknown(z, _ZONE_KEYS, f"building.zones[{idx}]")
        zid = z.get("id", idx + 1)
        zones.append(
            ZoneSpec(
                id=zid,
                volume=z["volume"],
                window_area=z.get("window_area", 0.0),
                is_ground_floor=z.get("is_ground_floor", False),
                is_perimeter=z.get("is_perimeter", False),
                occupancy=occ[zid - 1] if 1 <= zid <= m else 0.0,
                hvac_present=bool(ac[zid - 1]) if 1 <= zid <= m else True,
                hvac_efficiency=z.get("hvac_efficiency", 1.0),
            )
        )
    return BuildingTopology(
        zones=tuple(zones),
        adjacency=tuple(SharedWall.from_dict(w) for w in doc.get("adjacency", [])),
        exterior_walls=tuple(
            BoundarySurface.from_dict(s) for s in doc.get("exterior_walls", [])
        ),
        ground_contact=tuple(
            BoundarySurface.from_dict(s) for s in doc.get("ground_contact", [])
        ),
    )


def _apply_thermal_overrides(params: ThermalParameters, doc: dict) -> ThermalParameters:
    caps = list(params.capacitance)
    if "capacitance_scale" in doc:
        caps = [c * float(doc["capacitance_scale"]) for c in caps]
    if "capacitance" in doc:
        override = _per_zone(doc["capacitance"], len(caps), "capacitance")
        caps = [o if o is not None else c for c, o in zip(caps, override)]
    resistance = dict(params.resistance)
    ground = dict(params.resistance_ground)
    exterior = dict(params.resistance_exterior)
    for key, value in doc.get("resistance", {}).items():
        kind, _, rest = key.partition(":")
        if kind == "wall":
            a, b = (int(v) for v in rest.split("-"))
            resistance[tuple(sorted((a, b)))] = float(value)
        elif kind == "ground":
            ground[int(rest)] = float(value)
        elif kind == "exterior":
            exterior[int(rest)] = float(value)
        else:
            raise ConfigurationError(f"unknown resistance override key {key!r}")
    return ThermalParameters(
        capacitance=tuple(caps),
        resistance=resistance,
        resistance_ground=ground,
        resistance_exterior=exterior,
    )


def _bundled_dir(kind: str):
    return files("thermoenv.data").joinpath(kind)


def _resolve_weather(name: str, scenario_path: Path) -> Path:
    p = Path(name)
    if p.is_absolute() and p.exists():
        return p
    local = scenario_path.parent / p
    if local.exists():
        return local
    bundled = _bundled_dir("weather").joinpath(p.name)
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigurationError(f"weather file not found: {name} (looked beside "
                             f"{scenario_path} and in the bundled weather set)")


def load_scenario(path_or_name, scenario_dir=None) -> Scenario:
    """Load and fully resolve a scenario by file path or bundled name."""
    path = find_scenario(path_or_name, scenario_dir)
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from exc
    _reject_unknown(doc, _TOP_KEYS, f"scenario {path.name}")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise ConfigurationError(
            f"{path.name}: missing required field(s): {', '.join(missing)} "
            "(building, weather_file, ground_temps are required)"
        )

    occupancy = doc.get("occupancy", DEFAULTS["occupancy"])
    ac_map = doc.get("ac_map", True)
    topology = _build_topology(doc["building"], occupancy, ac_map)
    m = topology.zone_count

    params = derive_thermal_parameters(topology, doc.get("u_factors"))
    params = _apply_thermal_overrides(params, doc)

    solar = SolarParameters(
        shgc=doc.get("shgc", DEFAULTS["shgc"]),
        shgc_weight=doc.get("shgc_weight", DEFAULTS["shgc_weight"]),
        ground_weight=doc.get("ground_weight", DEFAULTS["ground_weight"]),
    )
    if "occupant_coefficients" in doc:
        coeffs = OccupantHeatCoefficients(
            c=tuple(doc["occupant_coefficients"]),
            metabolic_rate=doc.get("metabolic_rate", DEFAULTS["activity_schedule"]),
        )
    else:
        coeffs = default_occupant_coefficients()
        if "metabolic_rate" in doc:
            coeffs = OccupantHeatCoefficients(coeffs.c, doc["metabolic_rate"])

    ground_temps = doc["ground_temps"]
    weather = load_weather(_resolve_weather(doc["weather_file"], path), ground_temps)

    dt = float(doc.get("time_resolution_s", DEFAULTS["time_resolution_s"]))
    if len(weather) > 1 and abs(weather.dt - dt) > 1e-6:
        raise ConfigurationError(
            f"{path.name}: time_resolution_s={dt} but weather spacing is {weather.dt}"
        )

    continuous = assemble_continuous(topology, params, solar, coeffs)
    model = discretize(continuous, dt)

    ac = tuple(z.hvac_present for z in topology.zones)
    n_hvac = sum(ac)
    targets = doc.get("target_temps", DEFAULTS["target_temps"])
    if isinstance(targets, (int, float)):
        targets = [float(targets)] * n_hvac
    elif len(targets) == m and n_hvac != m:
        targets = [t for t, a in zip(targets, ac) if a]
    if len(targets) != n_hvac:
        raise ConfigurationError(
            f"{path.name}: target_temps needs {n_hvac} entries (HVAC zones)"
        )

    activity = doc.get("activity_schedule", DEFAULTS["activity_schedule"])
    if isinstance(activity, (int, float)):
        activity = np.full(len(weather), float(activity))
    else:
        activity = np.asarray(activity, dtype=float)

    episode_length = int(doc.get("episode_length", max(1, len(weather) - 1)))
    bounds = None
    if "state_bounds" in doc:
        sb = doc["state_bounds"]
        _reject_unknown(sb, {"low", "high"}, "state_bounds")
        bounds = (np.asarray(sb["low"], dtype=float), np.asarray(sb["high"], dtype=float))

    initial = doc.get("initial_temps", "target")
    if not isinstance(initial, str):
        initial = tuple(float(t) for t in _per_zone(initial, m, "initial_temps"))

    env_config = EnvConfig(
        discrete_model=model,
        weather=weather,
        reward=RewardConfig(beta=doc.get("beta", DEFAULTS["beta"]), target_temps=tuple(targets)),
        max_power=float(doc.get("max_power", DEFAULTS["max_power"])),
        ac_map=ac,
        episode_length=episode_length,
        occupant_coeffs=coeffs,
        initial_temps=initial,
        state_bounds=bounds,
        activity_schedule=activity,
        occupancy=tuple(z.occupancy for z in topology.zones),
        start_month=int(doc.get("start_month", DEFAULTS["start_month"])),
    )

    hours = doc.get("operating_hours", list(DEFAULTS["operating_hours"]))
    if len(hours) != 2 or not 0 <= hours[0] < hours[1] <= 24:
        raise ConfigurationError(f"{path.name}: operating_hours must be [start, end) in 0..24")

    return Scenario(
        name=doc.get("name", path.stem),
        description=doc.get("description", ""),
        topology=topology,
        thermal=params,
        solar=solar,
        occupant_coeffs=coeffs,
        env_config=env_config,
        operating_hours=(int(hours[0]), int(hours[1])),
        path=str(path),
    )


def bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    d = _bundled_dir("scenarios")
    return sorted(p.name[: -len(".json")] for p in d.iterdir() if p.name.endswith(".json"))


def find_scenario(path_or_name, scenario_dir=None) -> Path:
    """Resolve a scenario reference: explicit path, then ``scenario_dir``,
    then $THERMOENV_SCENARIO_DIR, then the bundled set."""
    p = Path(path_or_name)
    if p.suffix == ".json" and p.exists():
        return p
    candidates = []
    if scenario_dir:
        candidates.append(Path(scenario_dir) / f"{path_or_name}.json")
    env_dir = os.environ.get(SCENARIO_DIR_ENV)
    if env_dir:
        candidates.append(Path(env_dir) / f"{path_or_name}.json")
    for c in candidates:
        if c.exists():
            return c
    bundled = _bundled_dir("scenarios").joinpath(f"{path_or_name}.json")
    if bundled.is_file():
        return Path(str(bundled))
    raise ConfigurationError(
        f"scenario not found: {path_or_name!r} (bundled: {', '.join(bundled_scenarios())})"
    )
