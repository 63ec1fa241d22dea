"""Gym-convention environment backed by a ``thermoenv serve`` child process.

The adapter spawns the engine, reads the static spec over the NDJSON
protocol, and forwards reset/step calls. Observations pass through JSON
untouched (float64, no casting), so an adapter episode is numerically
identical to driving the protocol by hand.

When gymnasium is installed the class registers as a real ``gymnasium.Env``
(spaces included); otherwise a small built-in Box stands in and the API
shape stays the same: ``reset(seed=...) -> (obs, info)`` and
``step(a) -> (obs, reward, terminated, truncated, info)``.
"""

from __future__ import annotations

import importlib.util
import json
import os
import shutil
import subprocess
import sys

import numpy as np

try:  # optional: real Gym base class and spaces
    import gymnasium as _gym

    _ENV_BASE = _gym.Env
    _BOX = _gym.spaces.Box
except ImportError:  # pragma: no cover - exercised when gymnasium is absent
    from .spaces import Box as _BOX

    _ENV_BASE = object

ENGINE_ENV_VAR = "THERMOENV_BIN"


def resolve_engine_command(engine_cmd=None) -> list[str]:
    """Locate the engine: explicit command, $THERMOENV_BIN, the ``thermoenv``
    executable on PATH, or the module in the current interpreter."""
    if engine_cmd:
        return [engine_cmd] if isinstance(engine_cmd, str) else list(engine_cmd)
    env_bin = os.environ.get(ENGINE_ENV_VAR)
    if env_bin:
        return [env_bin]
    on_path = shutil.which("thermoenv")
    if on_path:
        return [on_path]
    if importlib.util.find_spec("thermoenv") is not None:
        return [sys.executable, "-m", "thermoenv"]
    raise RuntimeError(
        "thermoenv engine not found: install the thermoenv package, put the "
        f"'thermoenv' executable on PATH, or set ${ENGINE_ENV_VAR}"
    )


class ThermoBuildingEnv(_ENV_BASE):
    """One adapter instance owns one engine child process."""

    metadata = {"render_modes": []}

    def __init__(
        self,
        scenario: str,
        beta: float | None = None,
        episode_length: int | None = None,
        scenario_dir: str | None = None,
        engine_cmd=None,
    ):
        cmd = resolve_engine_command(engine_cmd) + ["serve", "--scenario", scenario]
        if beta is not None:
            cmd += ["--beta", str(beta)]
        if episode_length is not None:
            cmd += ["--episode-length", str(episode_length)]
        if scenario_dir is not None:
            cmd += ["--scenario-dir", str(scenario_dir)]
        try:
            self._proc = subprocess.Popen(
                cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
            )
        except OSError as exc:
            raise RuntimeError(f"failed to start engine {cmd[0]!r}: {exc}") from exc
        self._closed = False
        spec = self._request({"cmd": "spec"})
        if "error" in spec:
            self.close()
            raise RuntimeError(f"engine rejected scenario {scenario!r}: {spec['error']}")
        self.spec_info = spec
        self.zones = int(spec["zones"])
        self.action_dim = int(spec["action_dim"])
        self.obs_dim = int(spec["obs_dim"])
        self.observation_space = _BOX(
            low=np.asarray(spec["obs_low"], dtype=np.float64),
            high=np.asarray(spec["obs_high"], dtype=np.float64),
            dtype=np.float64,
        )
        self.action_space = _BOX(
            low=-np.ones(self.action_dim), high=np.ones(self.action_dim), dtype=np.float64
        )

    # -- protocol plumbing -------------------------------------------------
    def _request(self, payload: dict) -> dict:
        if self._closed or self._proc.poll() is not None:
            raise RuntimeError("engine process is not running")
        self._proc.stdin.write(json.dumps(payload) + "\n")
        self._proc.stdin.flush()
        line = self._proc.stdout.readline()
        if not line:
            err = self._proc.stderr.read() if self._proc.stderr else ""
            raise RuntimeError(f"engine closed the stream unexpectedly: {err.strip()}")
        return json.loads(line)

    # -- Gym API ------------------------------------------------------------
    def reset(self, seed: int | None = None, options=None):
        resp = self._request({"cmd": "reset", "seed": int(seed or 0)})
        if "error" in resp:
            raise RuntimeError(resp["error"])
        obs = np.asarray(resp["state"], dtype=np.float64)
        return obs, {"k": resp["k"]}

    def step(self, action):
        action = np.asarray(action, dtype=np.float64).ravel()
        resp = self._request({"cmd": "step", "action": action.tolist()})
        if "error" in resp:
            raise RuntimeError(resp["error"])
        obs = np.asarray(resp["state"], dtype=np.float64)
        info = dict(resp.get("info", {}))
        info["k"] = resp["k"]
        # the engine's done flag marks the horizon, i.e. a time-limit truncation
        return obs, float(resp["reward"]), False, bool(resp["done"]), info

    def close(self):
        if self._closed:
            return
        self._closed = True
        proc = self._proc
        try:
            if proc.poll() is None:
                try:
                    proc.stdin.write(json.dumps({"cmd": "close"}) + "\n")
                    proc.stdin.flush()
                except (BrokenPipeError, OSError):
                    pass
                try:
                    proc.wait(timeout=5)
                except subprocess.TimeoutExpired:
                    proc.kill()
                    proc.wait(timeout=5)
        finally:
            for stream in (proc.stdin, proc.stdout, proc.stderr):
                if stream:
                    stream.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
        return False

    def __del__(self):  # last-resort cleanup; close() is the supported path
        try:
            self.close()
        except Exception:
            pass


def make_env(
    scenario: str,
    beta: float | None = None,
    episode_length: int | None = None,
    scenario_dir: str | None = None,
    engine_cmd=None,
) -> ThermoBuildingEnv:
    """Spawn an engine child for ``scenario`` and wrap it as a Gym env."""
    return ThermoBuildingEnv(
        scenario,
        beta=beta,
        episode_length=episode_length,
        scenario_dir=scenario_dir,
        engine_cmd=engine_cmd,
    )
