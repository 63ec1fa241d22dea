"""Command-line entry point.

    thermoenv simulate  --scenario NAME --controller rule-based --steps 24 --out run.csv
    thermoenv fit       --trajectory run.csv --scenario NAME --out model.json
    thermoenv benchmark --config bench.json --out-dir results/
    thermoenv serve     --scenario NAME [--transport tcp --port 9000]
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .benchmark import ControllerSpec, run_benchmark, run_episode
from .core import ConfigurationError, RewardConfig
from .environment import read_trajectory_csv, write_trajectory_csv
from .scenario import bundled_scenarios, load_scenario
from .serve import serve_session, serve_tcp
from .sysid import collect, evaluate, fit

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermoenv",
        description="RC thermal building simulator and control benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one episode and export the trajectory")
    sim.add_argument("--scenario", required=True, help="bundled name or JSON path")
    sim.add_argument("--controller", default="rule-based",
                     choices=["rule-based", "random", "mpc"])
    sim.add_argument("--steps", type=int, default=None, help="episode length override")
    sim.add_argument("--out", default="trajectory.csv")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--beta", type=float, default=None, help="reward weight override")
    sim.add_argument("--horizon", type=int, default=12, help="MPC horizon")
    sim.add_argument("--deadband", type=float, default=0.5)
    sim.add_argument("--scenario-dir", default=None)

    fitp = sub.add_parser("fit", help="fit a data-driven next-state model from a trajectory CSV")
    fitp.add_argument("--trajectory", required=True)
    fitp.add_argument("--scenario", required=True,
                      help="scenario the trajectory came from (for action scaling)")
    fitp.add_argument("--out", default="model.json")
    fitp.add_argument("--ridge", type=float, default=1e-9,
                      help="ridge weight; constant exogenous columns need > 0")
    fitp.add_argument("--rollout-horizon", type=int, default=24)
    fitp.add_argument("--scenario-dir", default=None)

    bench = sub.add_parser("benchmark", help="run a controller x scenario matrix")
    bench.add_argument("--config", required=True, help="benchmark config JSON")
    bench.add_argument("--out-dir", default="benchmark-results")
    bench.add_argument("--export-trajectories", action="store_true")
    bench.add_argument("--scenario-dir", default=None)

    srv = sub.add_parser("serve", help="speak the NDJSON environment protocol")
    srv.add_argument("--scenario", required=True)
    srv.add_argument("--transport", default="stdio", choices=["stdio", "tcp"])
    srv.add_argument("--port", type=int, default=9000)
    srv.add_argument("--beta", type=float, default=None)
    srv.add_argument("--episode-length", type=int, default=None)
    srv.add_argument("--scenario-dir", default=None)

    lst = sub.add_parser("scenarios", help="list bundled scenarios")
    lst.add_argument("--scenario-dir", default=None)
    return parser


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario, args.scenario_dir)
    params = {"seed": args.seed}
    if args.controller == "mpc":
        params["horizon"] = args.horizon
    if args.controller == "rule-based":
        params["deadband"] = args.deadband
    spec = ControllerSpec(id=args.controller, kind=args.controller, params=params)
    trajectory, metrics, control_time = run_episode(
        scenario, spec, seed=args.seed, episode_length=args.steps, beta=args.beta
    )
    write_trajectory_csv(trajectory, args.out)
    print(
        f"{scenario.name}: {len(trajectory)} steps | total energy "
        f"{metrics['total_energy_j']:.6g} J | mean deviation "
        f"{metrics['deviation_c']:.6g} degC | total reward "
        f"{metrics['episode_reward']:.9g} | control time {control_time:.3f} s"
    )
    print(f"trajectory written to {args.out}")
    return 0


def _cmd_fit(args) -> int:
    scenario = load_scenario(args.scenario, args.scenario_dir)
    trajectory = read_trajectory_csv(args.trajectory)
    config = scenario.env_config
    dataset = collect(trajectory, config)
    split = max(2, int(0.8 * len(trajectory)))
    if split >= len(trajectory):
        raise ConfigurationError(
            f"trajectory too short to fit and evaluate ({len(trajectory)} steps)"
        )
    model = fit(
        collect(trajectory.slice(0, split), config), ridge=args.ridge
    )
    horizon = min(args.rollout_horizon, max(1, len(trajectory) - split - 2))
    metrics = evaluate(model, trajectory.slice(split - 1, None), config, horizon=horizon)
    Path(args.out).write_text(json.dumps(model.to_dict()) + "\n")
    print(
        f"fit {len(dataset)} transitions (train {split}) | one-step RMSE "
        f"{metrics.one_step_rmse_c:.6g} degC | {metrics.horizon}-step rollout RMSE "
        f"{metrics.rollout_rmse_c:.6g} degC"
    )
    print(f"model written to {args.out}")
    return 0


def _cmd_benchmark(args) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    report = run_benchmark(
        config,
        out_dir=args.out_dir,
        scenario_dir=args.scenario_dir,
        export_trajectories=args.export_trajectories,
    )
    print(report.to_markdown())
    failures = [c for c in report.cells if c.error]
    print(f"report written to {args.out_dir}/benchmark.csv and benchmark.md")
    return 1 if failures and len(failures) == len(report.cells) else 0


def _cmd_serve(args) -> int:
    scenario = load_scenario(args.scenario, args.scenario_dir)
    config = scenario.env_config
    if args.beta is not None:
        config = replace(
            config,
            reward=RewardConfig(beta=args.beta, target_temps=config.reward.target_temps),
        )
    if args.episode_length is not None:
        config = replace(config, episode_length=args.episode_length)
    scenario = replace(scenario, env_config=config)
    if args.transport == "tcp":
        serve_tcp(scenario, args.port)
    else:
        serve_session(scenario, sys.stdin, sys.stdout)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "benchmark":
            return _cmd_benchmark(args)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "scenarios":
            for name in bundled_scenarios():
                print(name)
            return 0
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
