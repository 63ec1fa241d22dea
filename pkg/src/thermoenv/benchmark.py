"""Controller-vs-scenario benchmark harness.

Each cell runs one controller on one scenario for one seed and reports the
average absolute target deviation over HVAC zones during operating hours,
the average daily HVAC energy, the controller's summed wall-clock planning
time, and the episode reward. Cells fail independently; the run continues
and the failure lands in the report.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .controllers import make_controller
from .core import ConfigurationError, RewardConfig, Trajectory
from .environment import BuildingEnv, EnvConfig, write_trajectory_csv
from .scenario import Scenario, load_scenario

__all__ = [
    "ControllerSpec",
    "BenchmarkCell",
    "BenchmarkReport",
    "episode_metrics",
    "run_episode",
    "run_benchmark",
]


@dataclass(frozen=True)
class ControllerSpec:
    id: str
    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict) -> "ControllerSpec":
        d = dict(d)
        kind = d.pop("type")
        cid = d.pop("id", kind)
        return cls(id=cid, kind=kind, params=d)


@dataclass(frozen=True)
class BenchmarkCell:
    scenario: str
    controller_id: str
    seed: int
    deviation_c: float | None = None
    daily_energy_j: float | None = None
    control_time_s: float | None = None
    episode_reward: float | None = None
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "controller_id": self.controller_id,
            "seed": self.seed,
            "deviation_c": self.deviation_c,
            "daily_energy_j": self.daily_energy_j,
            "control_time_s": self.control_time_s,
            "episode_reward": self.episode_reward,
            "error": self.error,
        }


def _operating_mask(trajectory: Trajectory, hours: tuple[int, int]) -> np.ndarray:
    start, end = hours
    ks = np.array([r.state.step_index for r in trajectory.records])
    hour = (ks * trajectory.dt // 3600.0) % 24
    return (hour >= start) & (hour < end)


def episode_metrics(
    trajectory: Trajectory, config: EnvConfig, hours: tuple[int, int]
) -> dict:
    """Deviation/energy metrics from a logged trajectory; recomputable from
    the CSV export of the same trajectory."""
    if not trajectory.records:
        raise ConfigurationError("empty trajectory")
    mask = _operating_mask(trajectory, hours)
    targets = np.asarray(config.reward.target_temps)
    idx = config.hvac_zone_indices
    devs = np.array(
        [np.abs(np.asarray(r.state.zone_temps)[idx] - targets) for r in trajectory.records]
    )
    occupied = devs[mask]
    deviation = float(np.mean(occupied)) if occupied.size else 0.0
    total_energy = trajectory.total_energy_j()
    days = len(trajectory) * trajectory.dt / 86400.0
    return {
        "deviation_c": deviation,
        "daily_energy_j": total_energy / days,
        "total_energy_j": total_energy,
        "episode_reward": trajectory.total_reward(),
    }


def run_episode(
    scenario: Scenario,
    spec: ControllerSpec,
    seed: int = 0,
    episode_length: int | None = None,
    beta: float | None = None,
) -> tuple[Trajectory, dict, float]:
    """Run one controller through one episode; returns (trajectory, metrics,
    summed controller wall-clock seconds)."""
    config = scenario.env_config
    if beta is None:
        beta = spec.params.get("beta")
    if beta is not None:
        config = replace(
            config,
            reward=RewardConfig(beta=float(beta), target_temps=config.reward.target_temps),
        )
    if episode_length is not None:
        config = replace(config, episode_length=int(episode_length))
    params = {k: v for k, v in spec.params.items() if k != "beta"}
    params.setdefault("seed", seed)
    controller = make_controller(spec.kind, config, **params)
    env = BuildingEnv(config, scenario_name=scenario.name, controller_id=spec.id)
    state = env.reset(seed)
    control_time = 0.0
    done = False
    while not done:
        t0 = time.perf_counter()
        action = controller.act(state)
        control_time += time.perf_counter() - t0
        state, _, done, _ = env.step(action)
    trajectory = env.trajectory
    metrics = episode_metrics(trajectory, config, scenario.operating_hours)
    return trajectory, metrics, control_time


@dataclass(frozen=True)
class BenchmarkReport:
    cells: tuple[BenchmarkCell, ...]

    def aggregate(self) -> list[dict]:
        """Per (scenario, controller) averages across seeds."""
        groups: dict[tuple[str, str], list[BenchmarkCell]] = {}
        for c in self.cells:
            groups.setdefault((c.scenario, c.controller_id), []).append(c)
        rows = []
        for (scen, cid), cells in sorted(groups.items()):
            ok = [c for c in cells if not c.error]
            row = {
                "scenario": scen,
                "controller_id": cid,
                "seeds": len(cells),
                "failures": len(cells) - len(ok),
            }
            for key in ("deviation_c", "daily_energy_j", "control_time_s", "episode_reward"):
                vals = [getattr(c, key) for c in ok]
                row[key] = float(np.mean(vals)) if vals else None
            rows.append(row)
        return rows

    def to_csv(self, path) -> None:
        rows = self.aggregate()
        cols = [
            "scenario",
            "controller_id",
            "seeds",
            "failures",
            "deviation_c",
            "daily_energy_j",
            "control_time_s",
            "episode_reward",
        ]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for row in rows:
                fh.write(
                    ",".join("" if row[c] is None else repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in cols)
                    + "\n"
                )

    def to_markdown(self) -> str:
        rows = self.aggregate()
        lines = [
            "| Scenario | Controller | Avg deviation (degC) | Avg daily energy (J) | Control time (s) | Episode reward |",
            "|---|---|---|---|---|---|",
        ]
        for r in rows:
            def fmt(v, spec=".4g"):
                return "-" if v is None else format(v, spec)
            lines.append(
                f"| {r['scenario']} | {r['controller_id']} | {fmt(r['deviation_c'])} "
                f"| {fmt(r['daily_energy_j'], '.4e')} | {fmt(r['control_time_s'], '.3f')} "
                f"| {fmt(r['episode_reward'])} |"
            )
        errors = [c for c in self.cells if c.error]
        if errors:
            lines.append("")
            lines.append("Failures:")
            for c in errors:
                lines.append(f"- {c.scenario} / {c.controller_id} / seed {c.seed}: {c.error}")
        return "\n".join(lines) + "\n"


def run_benchmark(
    config: dict,
    out_dir=None,
    scenario_dir=None,
    export_trajectories: bool = False,
) -> BenchmarkReport:
    """Run the scenario x controller x seed matrix described by ``config``:

        {"scenarios": [...], "controllers": [{"type": ..., "id": ...,
         "beta": ..., ...}], "seeds": [...], "episode_length": optional}
    """
    scenarios = config.get("scenarios", [])
    specs = [ControllerSpec.from_dict(c) for c in config.get("controllers", [])]
    seeds = config.get("seeds", [0])
    episode_length = config.get("episode_length")
    cells = []
    out = Path(out_dir) if out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    for scen_name in scenarios:
        scenario = load_scenario(scen_name, scenario_dir)
        for spec in specs:
            for seed in seeds:
                try:
                    traj, metrics, control_time = run_episode(
                        scenario, spec, seed=seed, episode_length=episode_length
                    )
                    cells.append(
                        BenchmarkCell(
                            scenario=scenario.name,
                            controller_id=spec.id,
                            seed=seed,
                            deviation_c=metrics["deviation_c"],
                            daily_energy_j=metrics["daily_energy_j"],
                            control_time_s=control_time,
                            episode_reward=metrics["episode_reward"],
                        )
                    )
                    if out and export_trajectories:
                        write_trajectory_csv(
                            traj, out / f"{scenario.name}__{spec.id}__seed{seed}.csv"
                        )
                except Exception as exc:  # cell isolation is the contract
                    cells.append(
                        BenchmarkCell(
                            scenario=scen_name,
                            controller_id=spec.id,
                            seed=seed,
                            error=f"{type(exc).__name__}: {exc}",
                        )
                    )
    report = BenchmarkReport(cells=tuple(cells))
    if out:
        report.to_csv(out / "benchmark.csv")
        (out / "benchmark.md").write_text(report.to_markdown())
        (out / "benchmark_cells.json").write_text(
            json.dumps([c.to_dict() for c in report.cells], indent=1)
        )
    return report
