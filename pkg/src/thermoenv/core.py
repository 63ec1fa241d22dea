"""Shared domain types for the building thermal engine.

Every type is an immutable value object with a canonical JSON form:
``to_dict`` / ``from_dict`` use the field names below, matrices are nested
row-major lists, and round-tripping reproduces the object field for field.
Zone ids are 1-based and must form the contiguous set 1..M; matrix rows and
input columns are ordered by zone id.

The model input vector u is laid out as ``[T_ground, T_outdoor,
P_1..P_M, ghi]`` (M+3 entries) and the observation vector as
``[T_1..T_M, Q_person, T_ground, T_outdoor, ghi]`` (M+4 entries). All
modules rely on these orderings.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ConfigurationError",
    "ZoneSpec",
    "SharedWall",
    "BoundarySurface",
    "BuildingTopology",
    "ThermalParameters",
    "OccupantHeatCoefficients",
    "WeatherSeries",
    "SolarParameters",
    "ContinuousModel",
    "DiscreteModel",
    "EnvState",
    "EnvAction",
    "RewardConfig",
    "TrajectoryRecord",
    "Trajectory",
]


class ConfigurationError(ValueError):
    """A building, weather, or scenario description is inconsistent."""


def _readonly(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _require_finite(name: str, value) -> None:
    if not np.all(np.isfinite(value)):
        raise ConfigurationError(f"{name} must be finite, got {value!r}")


def _set(obj, **kwargs) -> None:
    for k, v in kwargs.items():
        object.__setattr__(obj, k, v)


@dataclass(frozen=True, eq=False)
class ZoneSpec:
    """One thermally lumped zone.

    ``occupancy`` is a person count, ``hvac_efficiency`` the dimensionless
    heat-delivery factor applied to the commanded HVAC power.
    """

    id: int
    volume: float
    window_area: float = 0.0
    is_ground_floor: bool = False
    is_perimeter: bool = False
    occupancy: float = 0.0
    hvac_present: bool = True
    hvac_efficiency: float = 1.0

    def __post_init__(self):
        if self.id < 1:
            raise ConfigurationError(f"zone id must be >= 1, got {self.id}")
        if not self.volume > 0:
            raise ConfigurationError(f"zone {self.id}: volume must be > 0")
        if self.window_area < 0:
            raise ConfigurationError(f"zone {self.id}: window_area must be >= 0")
        if self.occupancy < 0:
            raise ConfigurationError(f"zone {self.id}: occupancy must be >= 0")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "volume": self.volume,
            "window_area": self.window_area,
            "is_ground_floor": self.is_ground_floor,
            "is_perimeter": self.is_perimeter,
            "occupancy": self.occupancy,
            "hvac_present": self.hvac_present,
            "hvac_efficiency": self.hvac_efficiency,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ZoneSpec":
        return cls(**d)


@dataclass(frozen=True, eq=False)
class SharedWall:
    """Interior surface between two zones. ``u_factor`` may be None until
    resolved by parameter derivation."""

    zone_a: int
    zone_b: int
    area: float
    u_factor: float | None = None

    def __post_init__(self):
        if self.zone_a == self.zone_b:
            raise ConfigurationError(f"wall connects zone {self.zone_a} to itself")
        if not self.area > 0:
            raise ConfigurationError(
                f"wall {self.zone_a}-{self.zone_b}: area must be > 0"
            )
        a, b = sorted((self.zone_a, self.zone_b))
        _set(self, zone_a=a, zone_b=b)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.zone_a, self.zone_b)

    def to_dict(self) -> dict:
        return {
            "zones": [self.zone_a, self.zone_b],
            "area": self.area,
            "u_factor": self.u_factor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SharedWall":
        a, b = d["zones"]
        return cls(a, b, d["area"], d.get("u_factor"))


@dataclass(frozen=True, eq=False)
class BoundarySurface:
    """Surface tying one zone to the ground or the outdoor environment."""

    zone: int
    area: float
    u_factor: float | None = None

    def __post_init__(self):
        if not self.area > 0:
            raise ConfigurationError(f"zone {self.zone}: surface area must be > 0")

    def to_dict(self) -> dict:
        return {"zone": self.zone, "area": self.area, "u_factor": self.u_factor}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundarySurface":
        return cls(d["zone"], d["area"], d.get("u_factor"))


@dataclass(frozen=True, eq=False)
class BuildingTopology:
    """Zones plus the surfaces coupling them to each other, the ground, and
    the outdoor air.

    Invariants enforced here: zone ids are exactly 1..M, adjacency pairs are
    unique and in range, exterior walls appear only on perimeter zones, and
    ground contact only on ground-floor zones.
    """

    zones: tuple[ZoneSpec, ...]
    adjacency: tuple[SharedWall, ...] = ()
    exterior_walls: tuple[BoundarySurface, ...] = ()
    ground_contact: tuple[BoundarySurface, ...] = ()

    def __post_init__(self):
        zones = tuple(sorted(self.zones, key=lambda z: z.id))
        _set(
            self,
            zones=zones,
            adjacency=tuple(self.adjacency),
            exterior_walls=tuple(self.exterior_walls),
            ground_contact=tuple(self.ground_contact),
        )
        m = len(zones)
        ids = [z.id for z in zones]
        if ids != list(range(1, m + 1)):
            raise ConfigurationError(
                f"zone ids must be exactly 1..{m}, got {sorted(ids)}"
            )
        seen: set[tuple[int, int]] = set()
        for wall in self.adjacency:
            for z in wall.pair:
                if z not in range(1, m + 1):
                    raise ConfigurationError(
                        f"adjacency references unknown zone {z} "
                        f"in a {m}-zone building"
                    )
            if wall.pair in seen:
                raise ConfigurationError(f"duplicate adjacency {wall.pair}")
            seen.add(wall.pair)
        by_id = {z.id: z for z in zones}
        for s in self.exterior_walls:
            if s.zone not in by_id:
                raise ConfigurationError(f"exterior wall references unknown zone {s.zone}")
            if not by_id[s.zone].is_perimeter:
                raise ConfigurationError(
                    f"zone {s.zone} has an exterior wall but is not a perimeter zone"
                )
        for s in self.ground_contact:
            if s.zone not in by_id:
                raise ConfigurationError(f"ground contact references unknown zone {s.zone}")
            if not by_id[s.zone].is_ground_floor:
                raise ConfigurationError(
                    f"zone {s.zone} has ground contact but is not a ground-floor zone"
                )

    @property
    def zone_count(self) -> int:
        return len(self.zones)

    def neighbors(self, zone_id: int) -> list[int]:
        """Adjacent zone ids (excluding ground/exterior attachments)."""
        out = []
        for w in self.adjacency:
            if w.zone_a == zone_id:
                out.append(w.zone_b)
            elif w.zone_b == zone_id:
                out.append(w.zone_a)
        return sorted(out)

    def to_dict(self) -> dict:
        return {
            "zones": [z.to_dict() for z in self.zones],
            "adjacency": [w.to_dict() for w in self.adjacency],
            "exterior_walls": [s.to_dict() for s in self.exterior_walls],
            "ground_contact": [s.to_dict() for s in self.ground_contact],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BuildingTopology":
        return cls(
            zones=tuple(ZoneSpec.from_dict(z) for z in d["zones"]),
            adjacency=tuple(SharedWall.from_dict(w) for w in d.get("adjacency", [])),
            exterior_walls=tuple(
                BoundarySurface.from_dict(s) for s in d.get("exterior_walls", [])
            ),
            ground_contact=tuple(
                BoundarySurface.from_dict(s) for s in d.get("ground_contact", [])
            ),
        )


@dataclass(frozen=True, eq=False)
class ThermalParameters:
    """Lumped capacitances (J/K) and resistances (K/W) of the network.

    ``resistance`` is keyed by normalized zone pairs and symmetric by
    construction; ``resistance_ground`` / ``resistance_exterior`` map a zone
    id to the resistance of its ground / outdoor attachment.
    """

    capacitance: tuple[float, ...]
    resistance: dict[tuple[int, int], float] = field(default_factory=dict)
    resistance_ground: dict[int, float] = field(default_factory=dict)
    resistance_exterior: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        caps = tuple(float(c) for c in self.capacitance)
        if not all(c > 0 and math.isfinite(c) for c in caps):
            raise ConfigurationError("capacitances must be positive and finite")
        res = {}
        for pair, r in self.resistance.items():
            a, b = sorted(pair)
            if not (r > 0 and math.isfinite(r)):
                raise ConfigurationError(f"resistance {a}-{b} must be positive")
            res[(a, b)] = float(r)
        for name, table in (
            ("ground", self.resistance_ground),
            ("exterior", self.resistance_exterior),
        ):
            for z, r in table.items():
                if not (r > 0 and math.isfinite(r)):
                    raise ConfigurationError(f"{name} resistance of zone {z} must be positive")
        _set(
            self,
            capacitance=caps,
            resistance=res,
            resistance_ground={int(z): float(r) for z, r in self.resistance_ground.items()},
            resistance_exterior={int(z): float(r) for z, r in self.resistance_exterior.items()},
        )

    def pair_resistance(self, i: int, j: int) -> float:
        return self.resistance[tuple(sorted((i, j)))]

    def to_dict(self) -> dict:
        m = len(self.capacitance)
        ground = [self.resistance_ground.get(i) for i in range(1, m + 1)]
        exterior = [self.resistance_exterior.get(i) for i in range(1, m + 1)]
        return {
            "capacitance": list(self.capacitance),
            "resistance": [
                {"zones": [a, b], "r": r}
                for (a, b), r in sorted(self.resistance.items())
            ],
            "resistance_ground": ground,
            "resistance_exterior": exterior,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ThermalParameters":
        return cls(
            capacitance=tuple(d["capacitance"]),
            resistance={
                tuple(e["zones"]): e["r"] for e in d.get("resistance", [])
            },
            resistance_ground={
                i + 1: r for i, r in enumerate(d.get("resistance_ground", [])) if r is not None
            },
            resistance_exterior={
                i + 1: r for i, r in enumerate(d.get("resistance_exterior", [])) if r is not None
            },
        )


@dataclass(frozen=True, eq=False)
class OccupantHeatCoefficients:
    """The nine constants of the per-person sensible-heat polynomial plus the
    default metabolic rate (W/person). Signs are applied at evaluation; all
    nine are stored as given."""

    c: tuple[float, ...]
    metabolic_rate: float = 120.0

    def __post_init__(self):
        c = tuple(float(v) for v in self.c)
        if len(c) != 9:
            raise ConfigurationError(f"expected 9 coefficients, got {len(c)}")
        _require_finite("occupant heat coefficients", c)
        _require_finite("metabolic_rate", self.metabolic_rate)
        _set(self, c=c, metabolic_rate=float(self.metabolic_rate))

    def to_dict(self) -> dict:
        return {"c": list(self.c), "metabolic_rate": self.metabolic_rate}

    @classmethod
    def from_dict(cls, d: dict) -> "OccupantHeatCoefficients":
        return cls(tuple(d["c"]), d.get("metabolic_rate", 120.0))


@dataclass(frozen=True, eq=False)
class WeatherSeries:
    """Exogenous driving series at the simulation sample time.

    ``timestamps`` are seconds since episode start with uniform spacing;
    ``ground_temp`` holds one value per calendar month (12 entries).
    """

    timestamps: np.ndarray
    outdoor_temp: np.ndarray
    ghi: np.ndarray
    ground_temp: tuple[float, ...]

    def __post_init__(self):
        ts = _readonly(self.timestamps)
        te = _readonly(self.outdoor_temp)
        gh = _readonly(self.ghi)
        gt = tuple(float(v) for v in self.ground_temp)
        if ts.ndim != 1 or len(ts) < 1:
            raise ConfigurationError("weather series must have at least one step")
        if not (len(ts) == len(te) == len(gh)):
            raise ConfigurationError("weather columns must have equal length")
        if len(ts) > 1:
            deltas = np.diff(ts)
            dt = deltas[0]
            if dt <= 0:
                raise ConfigurationError("weather timestamps must be increasing")
            bad = np.nonzero(np.abs(deltas - dt) > 1e-6 * max(dt, 1.0))[0]
            if bad.size:
                row = int(bad[0]) + 2  # 1-based data row of the offending stamp
                raise ConfigurationError(
                    f"non-uniform weather spacing at row {row}: "
                    f"expected step {dt}, got {deltas[bad[0]]}"
                )
        if np.any(gh < 0):
            row = int(np.nonzero(gh < 0)[0][0]) + 1
            raise ConfigurationError(f"ghi must be >= 0 (row {row})")
        if len(gt) != 12:
            raise ConfigurationError(
                f"ground_temp needs one value per month (12), got {len(gt)}"
            )
        _require_finite("weather values", te)
        _set(self, timestamps=ts, outdoor_temp=te, ghi=gh, ground_temp=gt)

    def __len__(self) -> int:
        return len(self.timestamps)

    @property
    def dt(self) -> float:
        if len(self.timestamps) < 2:
            return 0.0
        return float(self.timestamps[1] - self.timestamps[0])

    def to_dict(self) -> dict:
        return {
            "timestamps": self.timestamps.tolist(),
            "outdoor_temp": self.outdoor_temp.tolist(),
            "ghi": self.ghi.tolist(),
            "ground_temp": list(self.ground_temp),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WeatherSeries":
        return cls(d["timestamps"], d["outdoor_temp"], d["ghi"], tuple(d["ground_temp"]))


@dataclass(frozen=True, eq=False)
class SolarParameters:
    """Window solar heat gain coefficient and the two attenuation weights
    applied to the irradiance and ground-temperature input columns."""

    shgc: float = 0.252
    shgc_weight: float = 0.1
    ground_weight: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.shgc <= 1.0:
            raise ConfigurationError(f"shgc must be in [0, 1], got {self.shgc}")
        for name in ("shgc_weight", "ground_weight"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigurationError(f"{name} must be in [0, 1], got {v}")

    def to_dict(self) -> dict:
        return {
            "shgc": self.shgc,
            "shgc_weight": self.shgc_weight,
            "ground_weight": self.ground_weight,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolarParameters":
        return cls(**d)


@dataclass(frozen=True, eq=False)
class ContinuousModel:
    """Continuous-time state-space system dx/dt = A x + B u + D f.

    ``A`` couples zone temperatures, ``B`` maps the input vector
    [T_ground, T_outdoor, P_1..P_M, ghi], ``D`` scales the occupant
    nonlinearity f by persons-per-capacitance.
    """

    A: np.ndarray
    B: np.ndarray
    D: np.ndarray
    occupant_coeffs: OccupantHeatCoefficients
    zone_count: int

    def __post_init__(self):
        m = int(self.zone_count)
        A = _readonly(self.A)
        B = _readonly(self.B)
        D = _readonly(self.D)
        if A.shape != (m, m):
            raise ConfigurationError(f"A must be {m}x{m}, got {A.shape}")
        if B.shape != (m, m + 3):
            raise ConfigurationError(f"B must be {m}x{m + 3}, got {B.shape}")
        if D.shape != (m,):
            raise ConfigurationError(f"D must have length {m}, got {D.shape}")
        _set(self, A=A, B=B, D=D, zone_count=m)

    def to_dict(self) -> dict:
        return {
            "A": self.A.tolist(),
            "B": self.B.tolist(),
            "D": self.D.tolist(),
            "occupant_coeffs": self.occupant_coeffs.to_dict(),
            "zone_count": self.zone_count,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ContinuousModel":
        return cls(
            A=d["A"],
            B=d["B"],
            D=d["D"],
            occupant_coeffs=OccupantHeatCoefficients.from_dict(d["occupant_coeffs"]),
            zone_count=d["zone_count"],
        )


@dataclass(frozen=True, eq=False)
class DiscreteModel:
    """Zero-order-hold discretization of a ContinuousModel at sample time dt:
    x[k+1] = A_d x[k] + B_d u[k] + D_d f[k]."""

    A_d: np.ndarray
    B_d: np.ndarray
    D_d: np.ndarray
    dt: float

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        A = _readonly(self.A_d)
        B = _readonly(self.B_d)
        D = _readonly(self.D_d)
        m = A.shape[0]
        if A.shape != (m, m) or B.shape != (m, m + 3) or D.shape != (m,):
            raise ConfigurationError(
                f"inconsistent discrete model shapes {A.shape}, {B.shape}, {D.shape}"
            )
        _set(self, A_d=A, B_d=B, D_d=D, dt=float(self.dt))

    @property
    def zone_count(self) -> int:
        return self.A_d.shape[0]

    def to_dict(self) -> dict:
        return {
            "A_d": self.A_d.tolist(),
            "B_d": self.B_d.tolist(),
            "D_d": self.D_d.tolist(),
            "dt": self.dt,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DiscreteModel":
        return cls(d["A_d"], d["B_d"], d["D_d"], d["dt"])


@dataclass(frozen=True, eq=False)
class EnvState:
    """Observation at one step: zone temperatures plus the exogenous values
    in effect. Packs to the vector [T_1..T_M, Q_person, T_ground, T_outdoor,
    ghi] of length M+4; ``step_index`` rides alongside the vector."""

    zone_temps: tuple[float, ...]
    occupant_heat: float
    ground_temp: float
    outdoor_temp: float
    ghi: float
    step_index: int = 0

    def __post_init__(self):
        temps = tuple(float(t) for t in self.zone_temps)
        _require_finite("zone_temps", temps)
        for name in ("occupant_heat", "ground_temp", "outdoor_temp", "ghi"):
            _require_finite(name, getattr(self, name))
        _set(
            self,
            zone_temps=temps,
            occupant_heat=float(self.occupant_heat),
            ground_temp=float(self.ground_temp),
            outdoor_temp=float(self.outdoor_temp),
            ghi=float(self.ghi),
            step_index=int(self.step_index),
        )

    @property
    def zone_count(self) -> int:
        return len(self.zone_temps)

    @property
    def mean_temp(self) -> float:
        return float(np.mean(self.zone_temps))

    def vector(self) -> np.ndarray:
        return np.array(
            list(self.zone_temps)
            + [self.occupant_heat, self.ground_temp, self.outdoor_temp, self.ghi]
        )

    @classmethod
    def from_vector(cls, vec: Sequence[float], step_index: int = 0) -> "EnvState":
        vec = np.asarray(vec, dtype=float)
        if vec.ndim != 1 or len(vec) < 5:
            raise ValueError(f"state vector needs at least 5 entries, got {vec.shape}")
        m = len(vec) - 4
        return cls(
            zone_temps=tuple(vec[:m]),
            occupant_heat=float(vec[m]),
            ground_temp=float(vec[m + 1]),
            outdoor_temp=float(vec[m + 2]),
            ghi=float(vec[m + 3]),
            step_index=step_index,
        )

    def to_dict(self) -> dict:
        return {
            "zone_temps": list(self.zone_temps),
            "occupant_heat": self.occupant_heat,
            "ground_temp": self.ground_temp,
            "outdoor_temp": self.outdoor_temp,
            "ghi": self.ghi,
            "step_index": self.step_index,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnvState":
        return cls(
            zone_temps=tuple(d["zone_temps"]),
            occupant_heat=d["occupant_heat"],
            ground_temp=d["ground_temp"],
            outdoor_temp=d["outdoor_temp"],
            ghi=d["ghi"],
            step_index=d.get("step_index", 0),
        )


@dataclass(frozen=True, eq=False)
class EnvAction:
    """Normalized HVAC command, one entry per HVAC-equipped zone, each in
    [-1, 1] (positive heats, negative cools)."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        _require_finite("action values", vals)
        _set(self, values=vals)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    def validate(self, n_hvac: int | None = None) -> None:
        if n_hvac is not None and len(self.values) != n_hvac:
            raise ValueError(
                f"action has {len(self.values)} entries, expected {n_hvac}"
            )
        if any(abs(v) > 1.0 for v in self.values):
            raise ValueError(f"action components must lie in [-1, 1]: {self.values}")

    def to_dict(self) -> dict:
        return {"values": list(self.values)}

    @classmethod
    def from_dict(cls, d: dict) -> "EnvAction":
        return cls(tuple(d["values"]))


@dataclass(frozen=True, eq=False)
class RewardConfig:
    """Weight and targets of the L2 reward: ``beta`` trades comfort tracking
    (high beta) against energy use (low beta); ``target_temps`` has one entry
    per HVAC zone, ordered by zone id."""

    beta: float
    target_temps: tuple[float, ...]

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ConfigurationError(f"beta must be in [0, 1], got {self.beta}")
        _set(self, target_temps=tuple(float(t) for t in self.target_temps))

    def to_dict(self) -> dict:
        return {"beta": self.beta, "target_temps": list(self.target_temps)}

    @classmethod
    def from_dict(cls, d: dict) -> "RewardConfig":
        return cls(d["beta"], tuple(d["target_temps"]))


@dataclass(frozen=True, eq=False)
class TrajectoryRecord:
    """One logged step: the state observed, the (clipped) action applied, the
    transition reward, HVAC energy used over the step, and the mean absolute
    target deviation of HVAC zones at the observed state."""

    state: EnvState
    action: EnvAction
    reward: float
    energy_j: float
    comfort_dev_c: float

    def to_dict(self) -> dict:
        return {
            "state": self.state.to_dict(),
            "action": self.action.to_dict(),
            "reward": self.reward,
            "energy_j": self.energy_j,
            "comfort_dev_c": self.comfort_dev_c,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrajectoryRecord":
        return cls(
            state=EnvState.from_dict(d["state"]),
            action=EnvAction.from_dict(d["action"]),
            reward=d["reward"],
            energy_j=d["energy_j"],
            comfort_dev_c=d["comfort_dev_c"],
        )


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Episode log: one record per step taken, plus metadata."""

    records: tuple[TrajectoryRecord, ...]
    scenario: str = ""
    seed: int = 0
    controller_id: str = ""
    dt: float = 3600.0

    def __post_init__(self):
        _set(self, records=tuple(self.records))

    def __len__(self) -> int:
        return len(self.records)

    def total_energy_j(self) -> float:
        return float(sum(r.energy_j for r in self.records))

    def total_reward(self) -> float:
        return float(sum(r.reward for r in self.records))

    def slice(self, start: int, stop: int | None = None) -> "Trajectory":
        return Trajectory(
            records=self.records[start:stop],
            scenario=self.scenario,
            seed=self.seed,
            controller_id=self.controller_id,
            dt=self.dt,
        )

    def to_dict(self) -> dict:
        return {
            "records": [r.to_dict() for r in self.records],
            "scenario": self.scenario,
            "seed": self.seed,
            "controller_id": self.controller_id,
            "dt": self.dt,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Trajectory":
        return cls(
            records=tuple(TrajectoryRecord.from_dict(r) for r in d["records"]),
            scenario=d.get("scenario", ""),
            seed=d.get("seed", 0),
            controller_id=d.get("controller_id", ""),
            dt=d.get("dt", 3600.0),
        )


def to_json(obj) -> str:
    """Canonical JSON text for any type in this module."""
    return json.dumps(obj.to_dict(), sort_keys=False)


def from_json(cls, text: str):
    return cls.from_dict(json.loads(text))
