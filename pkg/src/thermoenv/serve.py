"""Newline-delimited JSON session protocol for driving an environment from
another process.

One request per line, one response per line. Commands:

    {"cmd": "spec"}                     -> static environment description
    {"cmd": "reset", "seed": 0}         -> {"state": [...], "k": 0}
    {"cmd": "step", "action": [...]}    -> {"state": [...], "k", "reward",
                                            "done", "info"}
    {"cmd": "close"}                    -> {"ok": true} and end of session

Floats serialize through Python's repr, which round-trips exactly, so a
driver replaying the same actions sees bit-identical numbers. Malformed
requests produce {"error": ...} and the session continues.
"""

from __future__ import annotations

import json
import socket

from .core import EnvAction
from .environment import BuildingEnv, EnvConfig
from .scenario import Scenario

__all__ = ["spec_payload", "handle_request", "serve_session", "serve_tcp"]


def spec_payload(scenario: Scenario) -> dict:
    cfg = scenario.env_config
    low, high = cfg.state_bounds
    return {
        "scenario": scenario.name,
        "zones": cfg.zone_count,
        "action_dim": cfg.n_hvac,
        "obs_dim": cfg.zone_count + 4,
        "dt": cfg.discrete_model.dt,
        "episode_length": cfg.episode_length,
        "obs_low": low.tolist(),
        "obs_high": high.tolist(),
        "target_temps": list(cfg.reward.target_temps),
        "beta": cfg.reward.beta,
        "max_power": cfg.max_power,
        "ac_map": list(cfg.ac_map),
    }


def handle_request(env: BuildingEnv, scenario: Scenario, request: dict) -> tuple[dict, bool]:
    """Returns (response, should_close)."""
    cmd = request.get("cmd")
    if cmd == "spec":
        return spec_payload(scenario), False
    if cmd == "reset":
        state = env.reset(seed=int(request.get("seed", 0)))
        return {"state": state.vector().tolist(), "k": state.step_index}, False
    if cmd == "step":
        if env.state is None:
            return {"error": "step before reset"}, False
        if "action" not in request:
            return {"error": "step request needs an 'action' array"}, False
        try:
            action = EnvAction(tuple(float(v) for v in request["action"]))
            state, reward, done, info = env.step(action)
        except Exception as exc:
            return {"error": f"{type(exc).__name__}: {exc}"}, False
        return {
            "state": state.vector().tolist(),
            "k": state.step_index,
            "reward": reward,
            "done": done,
            "info": info,
        }, False
    if cmd == "close":
        return {"ok": True}, True
    return {"error": f"unknown command {cmd!r}"}, False


def serve_session(scenario: Scenario, infile, outfile) -> None:
    """Run one request/response session until close or end-of-stream."""
    env = BuildingEnv(scenario.env_config, scenario_name=scenario.name)
    for line in infile:
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            if not isinstance(request, dict):
                raise ValueError("request must be a JSON object")
        except ValueError as exc:
            response, close = {"error": f"malformed request: {exc}"}, False
        else:
            response, close = handle_request(env, scenario, request)
        outfile.write(json.dumps(response) + "\n")
        outfile.flush()
        if close:
            break


def serve_tcp(scenario: Scenario, port: int) -> None:
    """Accept a single local connection and run a session over it."""
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as srv:
        srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        srv.bind(("127.0.0.1", port))
        srv.listen(1)
        conn, _ = srv.accept()
        with conn, conn.makefile("r") as rf, conn.makefile("w") as wf:
            serve_session(scenario, rf, wf)
