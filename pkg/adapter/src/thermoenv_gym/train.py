"""Convenience training entry point delegating to Stable-Baselines3.

The adapter ships no RL algorithms of its own; install the extras
(``pip install thermoenv-gym[rl]``) to use this module.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .env import ThermoBuildingEnv

_ALGOS = ("ppo", "sac")


def _require_sb3():
    try:
        import stable_baselines3 as sb3
    except ImportError as exc:
        raise RuntimeError(
            "train_baseline needs Stable-Baselines3 and gymnasium; install them "
            "with: pip install 'thermoenv-gym[rl]'"
        ) from exc
    return sb3


def train_baseline(
    env: ThermoBuildingEnv,
    algo_name: str = "ppo",
    timesteps: int = 50_000,
    out_dir: str = ".",
    seed: int = 0,
):
    """Train PPO or SAC on an adapter env; saves the policy and a learning
    curve CSV (columns: timesteps, episode_reward). Returns (policy_path,
    curve_path)."""
    algo_name = algo_name.lower()
    if algo_name not in _ALGOS:
        raise ValueError(f"algo_name must be one of {_ALGOS}, got {algo_name!r}")
    sb3 = _require_sb3()
    from stable_baselines3.common.monitor import Monitor

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    monitored = Monitor(env)
    algo = {"ppo": sb3.PPO, "sac": sb3.SAC}[algo_name]
    model = algo("MlpPolicy", monitored, seed=seed, verbose=0)
    model.learn(total_timesteps=int(timesteps))

    policy_path = out / f"{algo_name}-policy.zip"
    model.save(policy_path)

    curve_path = out / f"{algo_name}-learning-curve.csv"
    lengths = monitored.get_episode_lengths()
    rewards = monitored.get_episode_rewards()
    with open(curve_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timesteps", "episode_reward"])
        for steps, reward in zip(np.cumsum(lengths), rewards):
            writer.writerow([int(steps), float(reward)])
    return policy_path, curve_path


def evaluate_policy(env: ThermoBuildingEnv, policy=None, episodes: int = 5, seed: int = 0):
    """Mean episode reward of a policy (None = uniform random actions)."""
    totals = []
    rng = np.random.default_rng(seed)
    for ep in range(episodes):
        obs, _ = env.reset(seed=seed + ep)
        total, truncated, terminated = 0.0, False, False
        while not (truncated or terminated):
            if policy is None:
                action = rng.uniform(-1.0, 1.0, env.action_dim)
            else:
                action, _ = policy.predict(obs, deterministic=True)
            obs, reward, terminated, truncated, _ = env.step(action)
            total += reward
        totals.append(total)
    return float(np.mean(totals)), float(np.std(totals))
