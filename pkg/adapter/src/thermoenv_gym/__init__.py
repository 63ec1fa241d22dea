"""Gym-style wrapper for the thermoenv building simulator."""

from .env import ThermoBuildingEnv, make_env, resolve_engine_command
from .train import evaluate_policy, train_baseline

__version__ = "0.1.0"
