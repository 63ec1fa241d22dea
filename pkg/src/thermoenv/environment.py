"""Episodic simulation core: reset/step semantics, action scaling, reward.

The transition is x[k+1] = A_d x[k] + B_d u[k] + D_d f[k] with the input
vector u[k] = [T_ground, T_outdoor, P_1..P_M, ghi] built from the exogenous
values carried in the current state and the scaled HVAC powers. The occupant
nonlinearity f is evaluated at the current mean zone temperature and held
constant over the step, matching the zero-order hold applied to u.

`step_env` / `reset_env` are pure; `BuildingEnv` is a thin stateful wrapper
that also logs a Trajectory.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    ConfigurationError,
    DiscreteModel,
    EnvAction,
    EnvState,
    OccupantHeatCoefficients,
    RewardConfig,
    Trajectory,
    TrajectoryRecord,
    WeatherSeries,
)
from .dynamics import nonlinear_residual, sensible_heat_per_person

__all__ = [
    "EnvConfig",
    "default_state_bounds",
    "ground_temp_at",
    "reset_env",
    "scale_action",
    "reward_l2",
    "step_env",
    "BuildingEnv",
    "write_trajectory_csv",
    "read_trajectory_csv",
]

SECONDS_PER_MONTH = 30 * 86400  # fixed 30-day months for ground-temp lookup


def default_state_bounds(zone_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Generous default observation bounds: [temps, Q_person, Tg, Te, ghi]."""
    low = np.array([-40.0] * zone_count + [-1000.0, -50.0, -60.0, 0.0])
    high = np.array([60.0] * zone_count + [1000.0, 60.0, 60.0, 2000.0])
    return low, high


@dataclass(frozen=True, eq=False)
class EnvConfig:
    """Everything one episode needs.

    ``ac_map`` flags HVAC per zone; ``occupancy`` mirrors the person counts
    baked into the model's D vector (kept for logging/metadata).
    ``initial_temps`` is either a per-zone list or the string "target"
    (HVAC zones start at their target, others at the first outdoor value).
    ``activity_schedule`` gives the metabolic rate (W/person) per step.
    """

    discrete_model: DiscreteModel
    weather: WeatherSeries
    reward: RewardConfig
    max_power: float
    ac_map: tuple[bool, ...]
    episode_length: int
    occupant_coeffs: OccupantHeatCoefficients
    initial_temps: tuple[float, ...] | str = "target"
    state_bounds: tuple[np.ndarray, np.ndarray] | None = None
    activity_schedule: np.ndarray | None = None
    occupancy: tuple[float, ...] | None = None
    start_month: int = 1

    def __post_init__(self):
        m = self.discrete_model.zone_count
        if len(self.ac_map) != m:
            raise ConfigurationError(f"ac_map needs {m} entries, got {len(self.ac_map)}")
        if not self.max_power > 0:
            raise ConfigurationError(f"max_power must be > 0, got {self.max_power}")
        if len(self.weather) == 0:
            raise ConfigurationError("weather series is empty")
        if not 1 <= self.episode_length <= len(self.weather):
            raise ConfigurationError(
                f"episode_length {self.episode_length} outside 1..{len(self.weather)} "
                "(weather length)"
            )
        if len(self.weather) > 1 and abs(self.weather.dt - self.discrete_model.dt) > 1e-6:
            raise ConfigurationError(
                f"weather spacing {self.weather.dt} s != model sample time "
                f"{self.discrete_model.dt} s"
            )
        if not 1 <= self.start_month <= 12:
            raise ConfigurationError(f"start_month must be 1..12, got {self.start_month}")
        n_hvac = sum(self.ac_map)
        if len(self.reward.target_temps) != n_hvac:
            raise ConfigurationError(
                f"target_temps needs {n_hvac} entries (one per HVAC zone), "
                f"got {len(self.reward.target_temps)}"
            )
        if isinstance(self.initial_temps, str):
            if self.initial_temps != "target":
                raise ConfigurationError(
                    f'initial_temps must be a list or "target", got {self.initial_temps!r}'
                )
        elif len(self.initial_temps) != m:
            raise ConfigurationError(
                f"initial_temps needs {m} entries, got {len(self.initial_temps)}"
            )
        bounds = self.state_bounds
        if bounds is None:
            bounds = default_state_bounds(m)
        low = np.asarray(bounds[0], dtype=float)
        high = np.asarray(bounds[1], dtype=float)
        if low.shape != (m + 4,) or high.shape != (m + 4,):
            raise ConfigurationError(
                f"state bounds need {m + 4} entries per side"
            )
        if np.any(low >= high):
            raise ConfigurationError("state bounds need min < max componentwise")
        low.setflags(write=False)
        high.setflags(write=False)
        sched = self.activity_schedule
        if sched is None:
            sched = np.full(len(self.weather), self.occupant_coeffs.metabolic_rate)
        sched = np.asarray(sched, dtype=float)
        if sched.ndim != 1 or len(sched) < self.episode_length:
            raise ConfigurationError(
                f"activity_schedule needs at least {self.episode_length} entries"
            )
        sched.setflags(write=False)
        occ = self.occupancy
        if occ is not None and len(occ) != m:
            raise ConfigurationError(f"occupancy needs {m} entries, got {len(occ)}")
        object.__setattr__(self, "state_bounds", (low, high))
        object.__setattr__(self, "activity_schedule", sched)
        object.__setattr__(
            self, "ac_map", tuple(bool(b) for b in self.ac_map)
        )
        object.__setattr__(
            self, "occupancy", tuple(occ) if occ is not None else tuple([0.0] * m)
        )

    @property
    def zone_count(self) -> int:
        return self.discrete_model.zone_count

    @property
    def n_hvac(self) -> int:
        return sum(self.ac_map)

    @property
    def hvac_zone_indices(self) -> np.ndarray:
        return np.nonzero(self.ac_map)[0]

    def activity_at(self, k: int) -> float:
        sched = self.activity_schedule
        return float(sched[min(k, len(sched) - 1)])


def ground_temp_at(config: EnvConfig, k: int) -> float:
    """Monthly ground temperature in effect at step k (30-day months)."""
    t = k * config.discrete_model.dt
    month = (config.start_month - 1 + int(t // SECONDS_PER_MONTH)) % 12
    return float(config.weather.ground_temp[month])


def _weather_at(config: EnvConfig, k: int) -> tuple[float, float]:
    idx = min(k, len(config.weather) - 1)
    return float(config.weather.outdoor_temp[idx]), float(config.weather.ghi[idx])


def _clamp(vec: np.ndarray, config: EnvConfig) -> tuple[np.ndarray, list[int]]:
    low, high = config.state_bounds
    clamped = np.clip(vec, low, high)
    flagged = np.nonzero(clamped != vec)[0]
    return clamped, [int(i) for i in flagged]


def _make_state(
    config: EnvConfig, temps: np.ndarray, k: int
) -> tuple[EnvState, list[int]]:
    te, ghi = _weather_at(config, k)
    tg = ground_temp_at(config, k)
    qp = sensible_heat_per_person(
        config.occupant_coeffs, float(np.mean(temps)), config.activity_at(k)
    )
    vec = np.concatenate([temps, [qp, tg, te, ghi]])
    vec, flagged = _clamp(vec, config)
    return EnvState.from_vector(vec, step_index=k), flagged


def reset_env(config: EnvConfig, seed: int = 0) -> EnvState:
    """Initial observation at step 0. Deterministic; ``seed`` is recorded by
    the callers that log trajectories."""
    m = config.zone_count
    if isinstance(config.initial_temps, str):  # "target" sentinel
        te0, _ = _weather_at(config, 0)
        temps = np.full(m, te0)
        temps[config.hvac_zone_indices] = np.asarray(config.reward.target_temps)
    else:
        temps = np.asarray(config.initial_temps, dtype=float)
    state, _ = _make_state(config, temps, 0)
    return state


def scale_action(
    action: EnvAction | Sequence[float], config: EnvConfig
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Map a normalized action to per-zone watts.

    Returns (powers for all M zones with zeros on non-HVAC zones, the
    clipped normalized action, whether clipping occurred). Positive power
    heats, negative cools.
    """
    values = action.as_array() if isinstance(action, EnvAction) else np.asarray(action, dtype=float)
    if values.shape != (config.n_hvac,):
        raise ValueError(
            f"action needs {config.n_hvac} entries (HVAC zones), got {values.shape}"
        )
    clipped = np.clip(values, -1.0, 1.0)
    was_clipped = bool(np.any(clipped != values))
    powers = np.zeros(config.zone_count)
    powers[config.hvac_zone_indices] = clipped * config.max_power
    return powers, clipped, was_clipped


def reward_l2(
    state: EnvState, action: EnvAction | Sequence[float], config: EnvConfig
) -> float:
    """Default reward: -(1-beta)*||a||_2 - beta*||targets - T_hvac||_2 with
    the comfort term over HVAC zones only."""
    a = action.as_array() if isinstance(action, EnvAction) else np.asarray(action, dtype=float)
    beta = config.reward.beta
    temps = np.asarray(state.zone_temps)[config.hvac_zone_indices]
    dev = np.asarray(config.reward.target_temps) - temps
    return float(-(1.0 - beta) * np.linalg.norm(a) - beta * np.linalg.norm(dev))


def step_env(
    config: EnvConfig, state: EnvState, action: EnvAction | Sequence[float]
) -> tuple[EnvState, float, bool, dict]:
    """Advance one sample interval.

    Returns (next_state, reward, done, info); done flags the horizon end.
    info carries the HVAC energy drawn over the step, the comfort deviation
    of the new state, and clipping/clamping flags.
    """
    k = state.step_index
    if k >= config.episode_length:
        raise ValueError(f"episode finished at step {config.episode_length}; reset first")
    model = config.discrete_model
    powers, clipped, was_clipped = scale_action(action, config)

    u = np.concatenate([[state.ground_temp, state.outdoor_temp], powers, [state.ghi]])
    f = nonlinear_residual(config.occupant_coeffs, state.mean_temp, config.activity_at(k))
    x = np.asarray(state.zone_temps)
    x_next = model.A_d @ x + model.B_d @ u + model.D_d * f

    next_state, clamped = _make_state(config, x_next, k + 1)
    clipped_action = EnvAction(tuple(clipped))
    reward = reward_l2(next_state, clipped_action, config)
    done = (k + 1) == config.episode_length

    hvac_temps = np.asarray(next_state.zone_temps)[config.hvac_zone_indices]
    comfort = np.abs(np.asarray(config.reward.target_temps) - hvac_temps)
    info = {
        "k": k + 1,
        "powers_w": powers.tolist(),
        "energy_j": float(model.dt * np.sum(np.abs(powers))),
        "comfort_dev_c": float(np.mean(comfort)) if len(comfort) else 0.0,
        "action_clipped": was_clipped,
        "state_clamped": clamped,
        "nonlinear_heat_w_per_person": f,
    }
    return next_state, reward, done, info


def _comfort_at(config: EnvConfig, state: EnvState) -> float:
    temps = np.asarray(state.zone_temps)[config.hvac_zone_indices]
    if len(temps) == 0:
        return 0.0
    return float(np.mean(np.abs(np.asarray(config.reward.target_temps) - temps)))


class BuildingEnv:
    """Stateful convenience wrapper around the pure reset/step functions.

    One instance is single-threaded; run several instances for parallelism.
    """

    def __init__(self, config: EnvConfig, scenario_name: str = "", controller_id: str = ""):
        self.config = config
        self.scenario_name = scenario_name
        self.controller_id = controller_id
        self.state: EnvState | None = None
        self.seed = 0
        self._records: list[TrajectoryRecord] = []

    def reset(self, seed: int = 0) -> EnvState:
        self.seed = seed
        self.state = reset_env(self.config, seed)
        self._records = []
        return self.state

    def step(self, action: EnvAction | Sequence[float]):
        if self.state is None:
            raise RuntimeError("call reset() before step()")
        prev = self.state
        next_state, reward, done, info = step_env(self.config, prev, action)
        self._records.append(
            TrajectoryRecord(
                state=prev,
                action=EnvAction(tuple(np.clip(
                    action.as_array() if isinstance(action, EnvAction) else np.asarray(action, dtype=float),
                    -1.0, 1.0,
                ))),
                reward=reward,
                energy_j=info["energy_j"],
                comfort_dev_c=_comfort_at(self.config, prev),
            )
        )
        self.state = next_state
        return next_state, reward, done, info

    @property
    def trajectory(self) -> Trajectory:
        return Trajectory(
            records=tuple(self._records),
            scenario=self.scenario_name,
            seed=self.seed,
            controller_id=self.controller_id,
            dt=self.config.discrete_model.dt,
        )


def write_trajectory_csv(trajectory: Trajectory, path) -> None:
    """Export: header k,t_seconds,T_1..T_M,Qp,Tg,Te,ghi,a_1..a_H,reward,energy_J.

    Floats are written with round-trip-exact precision.
    """
    if not trajectory.records:
        raise ValueError("cannot export an empty trajectory")
    m = trajectory.records[0].state.zone_count
    h = len(trajectory.records[0].action.values)
    header = (
        ["k", "t_seconds"]
        + [f"T_{i}" for i in range(1, m + 1)]
        + ["Qp", "Tg", "Te", "ghi"]
        + [f"a_{i}" for i in range(1, h + 1)]
        + ["reward", "energy_J"]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in trajectory.records:
            s = rec.state
            row = (
                [s.step_index, repr(s.step_index * trajectory.dt)]
                + [repr(t) for t in s.zone_temps]
                + [repr(s.occupant_heat), repr(s.ground_temp), repr(s.outdoor_temp), repr(s.ghi)]
                + [repr(v) for v in rec.action.values]
                + [repr(rec.reward), repr(rec.energy_j)]
            )
            writer.writerow(row)


def read_trajectory_csv(path) -> Trajectory:
    """Rebuild a Trajectory from the CSV export. Comfort deviations are not
    stored in the CSV and come back as 0; metadata fields come back empty."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        try:
            m = len([c for c in header if c.startswith("T_")])
            h = len([c for c in header if c.startswith("a_")])
            qp_col = header.index("Qp")
        except ValueError as exc:
            raise ConfigurationError(f"unrecognized trajectory header in {path}") from exc
        rows = [r for r in reader if r]
    if not rows:
        raise ConfigurationError(f"trajectory file {path} has no data rows")
    records = []
    dt = 3600.0
    for row in rows:
        k = int(row[0])
        t = float(row[1])
        if k == 1:
            dt = t
        temps = tuple(float(v) for v in row[2 : 2 + m])
        qp, tg, te, ghi = (float(v) for v in row[qp_col : qp_col + 4])
        actions = tuple(float(v) for v in row[qp_col + 4 : qp_col + 4 + h])
        reward, energy = float(row[-2]), float(row[-1])
        records.append(
            TrajectoryRecord(
                state=EnvState(temps, qp, tg, te, ghi, step_index=k),
                action=EnvAction(actions),
                reward=reward,
                energy_j=energy,
                comfort_dev_c=0.0,
            )
        )
    return Trajectory(records=tuple(records), dt=dt)
