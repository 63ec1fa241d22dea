"""Baseline control policies: rule-based thermostat, box-constrained MPC,
and a seeded random policy.

The MPC solves a finite-horizon problem over normalized actions in
[-1, 1]^(H*n) against the exact discrete dynamics with the occupant
nonlinearity frozen at the current state, using projected gradient descent
with backtracking. Both reward norms are smoothed with a tiny epsilon so the
gradient exists at zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DiscreteModel, EnvAction, EnvState, RewardConfig
from .dynamics import nonlinear_residual
from .environment import EnvConfig, ground_temp_at

__all__ = [
    "rule_based_action",
    "random_action",
    "Forecast",
    "MpcSolution",
    "solve_mpc",
    "mpc_plan",
    "RuleBasedController",
    "RandomController",
    "MpcController",
    "make_controller",
]

NORM_EPS = 1e-9


def rule_based_action(
    state: EnvState, config: EnvConfig, deadband: float = 0.5
) -> EnvAction:
    """Bang-bang thermostat: full heating below target - deadband, full
    cooling above target + deadband, idle inside the band."""
    temps = np.asarray(state.zone_temps)[config.hvac_zone_indices]
    targets = np.asarray(config.reward.target_temps)
    values = np.zeros(len(temps))
    values[temps < targets - deadband] = 1.0
    values[temps > targets + deadband] = -1.0
    return EnvAction(tuple(values))


def random_action(seed: int, step_index: int, dim: int) -> EnvAction:
    """I.i.d. uniform [-1, 1] components, reproducible from (seed, step)."""
    rng = np.random.default_rng([int(seed), int(step_index)])
    return EnvAction(tuple(rng.uniform(-1.0, 1.0, size=dim)))


def _smooth_norm(v: np.ndarray) -> float:
    return float(np.sqrt(np.dot(v, v) + NORM_EPS * NORM_EPS))


@dataclass(frozen=True, eq=False)
class Forecast:
    """Exogenous inputs over the planning horizon."""

    ground_temp: np.ndarray
    outdoor_temp: np.ndarray
    ghi: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.ground_temp, dtype=float)
        o = np.asarray(self.outdoor_temp, dtype=float)
        s = np.asarray(self.ghi, dtype=float)
        if not (len(g) == len(o) == len(s)):
            raise ValueError("forecast columns must share length")
        object.__setattr__(self, "ground_temp", g)
        object.__setattr__(self, "outdoor_temp", o)
        object.__setattr__(self, "ghi", s)

    def __len__(self) -> int:
        return len(self.ground_temp)


@dataclass(frozen=True, eq=False)
class MpcSolution:
    actions: np.ndarray  # horizon x n_hvac
    objective: float
    iterations: int
    pg_residual: float
    converged: bool
    objective_history: tuple[float, ...]


class _StackedMpcProblem:
    """Dense affine form of the horizon problem.

    Stacking actions z (horizon*n) and HVAC deviations d (horizon*n_hvac),
    d = L z + v with L block lower-triangular (block (k, j) = E A^(k-j) P for
    j <= k, E selecting HVAC rows). L depends only on the model, so one
    instance serves a whole receding-horizon episode; v is refreshed from the
    current state and forecast each solve.
    """

    def __init__(self, A, P, hvac_idx, horizon):
        self.horizon = horizon
        self.n = P.shape[1]
        self.n_dev = len(hvac_idx)
        self.hvac_idx = hvac_idx
        self.A = A
        self.P = P
        blocks = [P[hvac_idx, :]]  # E A^0 P
        for _ in range(horizon - 1):
            P = A @ P
            blocks.append(P[hvac_idx, :])
        L = np.zeros((horizon * self.n_dev, horizon * self.n))
        for k in range(horizon):
            for j in range(k + 1):
                L[
                    k * self.n_dev : (k + 1) * self.n_dev,
                    j * self.n : (j + 1) * self.n,
                ] = blocks[k - j]
        self.L = L

    def offsets(self, x0, c_seq, targets):
        """Deviation offsets v: zero-action rollout minus targets."""
        v = np.empty(self.horizon * self.n_dev)
        x = np.asarray(x0, dtype=float)
        for k in range(self.horizon):
            x = self.A @ x + c_seq[k]
            v[k * self.n_dev : (k + 1) * self.n_dev] = x[self.hvac_idx] - targets
        return v


def _block_norms(vec: np.ndarray, width: int, eps: float) -> np.ndarray:
    blocks = vec.reshape(-1, width)
    return np.sqrt(np.sum(blocks * blocks, axis=1) + eps * eps)


def _mpc_objective_and_grad(
    z: np.ndarray,
    problem: _StackedMpcProblem,
    v: np.ndarray,
    beta: float,
    want_grad: bool,
    eps: float = NORM_EPS,
):
    d = problem.L @ z + v
    dev_norms = _block_norms(d, problem.n_dev, eps)
    act_norms = _block_norms(z, problem.n, eps)
    J = float(beta * dev_norms.sum() + (1.0 - beta) * act_norms.sum())
    if not want_grad:
        return J, None
    w = (d.reshape(-1, problem.n_dev) / dev_norms[:, None]).ravel()
    grad = beta * (problem.L.T @ w)
    grad += (1.0 - beta) * (z.reshape(-1, problem.n) / act_norms[:, None]).ravel()
    return J, grad


def solve_mpc(
    model: DiscreteModel,
    x0: np.ndarray,
    forecast: Forecast,
    reward: RewardConfig,
    ac_map,
    max_power: float,
    f_frozen: float = 0.0,
    horizon: int = 12,
    max_iter: int = 500,
    tol: float = 1e-6,
    warm_start: np.ndarray | None = None,
    problem: "_StackedMpcProblem | None" = None,
) -> MpcSolution:
    """Minimize sum_k (1-beta)*||a_k||_2 + beta*||T_hvac[k+1] - targets||_2
    over a in [-1, 1]^(horizon x n_hvac).

    Projected gradient with backtracking on the step size; stops when the
    unit-step projected-gradient residual drops below ``tol``.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if len(forecast) < horizon:
        raise ValueError(
            f"forecast covers {len(forecast)} steps, horizon needs {horizon}"
        )
    hvac_idx = np.nonzero(np.asarray(ac_map, dtype=bool))[0]
    n = len(hvac_idx)
    if problem is None:
        P = model.B_d[:, 2 + hvac_idx] * max_power
        problem = _StackedMpcProblem(model.A_d, P, hvac_idx, horizon)
    c_seq = (
        np.outer(forecast.ground_temp[:horizon], model.B_d[:, 0])
        + np.outer(forecast.outdoor_temp[:horizon], model.B_d[:, 1])
        + np.outer(forecast.ghi[:horizon], model.B_d[:, -1])
        + model.D_d * f_frozen
    )
    targets = np.asarray(reward.target_temps, dtype=float)
    v = problem.offsets(np.asarray(x0, dtype=float), c_seq, targets)
    beta = reward.beta

    if warm_start is not None and np.shape(warm_start) == (horizon, n):
        z = np.clip(np.asarray(warm_start, dtype=float), -1.0, 1.0).ravel()
    else:
        z = np.zeros(horizon * n)

    # Smoothing continuation: the final epsilon keeps gradients defined at
    # zero, but descending through coarser smoothings first stops the solver
    # from crawling at the norm kinks where the optimum usually sits. Each
    # stage warm-starts the next; the smoothed objective only shrinks when
    # epsilon does, so the recorded history stays non-increasing.
    stages = [NORM_EPS]
    while stages[-1] < 1e-2:
        stages.append(min(stages[-1] * 1e2, 1e-1))
    stages.reverse()

    history = []
    iterations = 0
    pg = np.inf
    J = None
    for eps in stages:
        step = 1.0
        J, g = _mpc_objective_and_grad(z, problem, v, beta, True, eps)
        history.append(J)
        if not np.isfinite(J):
            raise FloatingPointError(f"non-finite MPC objective at iterate: {J}")
        stage_tol = max(tol, eps)
        pg = float(np.linalg.norm(z - np.clip(z - g, -1.0, 1.0)))
        while pg >= stage_tol and iterations < max_iter:
            iterations += 1
            # backtrack until the quadratic majorization at this step holds
            while True:
                z_new = np.clip(z - step * g, -1.0, 1.0)
                delta = z_new - z
                J_new, _ = _mpc_objective_and_grad(z_new, problem, v, beta, False, eps)
                bound = J + float(np.dot(g, delta)) + float(np.dot(delta, delta)) / (
                    2.0 * step
                )
                if J_new <= bound + 1e-15 or step < 1e-16:
                    break
                step *= 0.5
            if not np.isfinite(J_new):
                raise FloatingPointError(
                    f"non-finite MPC objective at iteration {iterations}: {J_new}"
                )
            z = z_new
            J, g = _mpc_objective_and_grad(z, problem, v, beta, True, eps)
            history.append(J)
            step *= 4.0
            pg = float(np.linalg.norm(z - np.clip(z - g, -1.0, 1.0)))
    return MpcSolution(
        actions=z.reshape(horizon, n),
        objective=J,
        iterations=iterations,
        pg_residual=pg,
        converged=pg < tol,
        objective_history=tuple(history),
    )


def mpc_plan(
    state: EnvState,
    model: DiscreteModel,
    forecast: Forecast,
    reward: RewardConfig,
    ac_map,
    max_power: float,
    f_frozen: float = 0.0,
    horizon: int = 12,
    **solver_opts,
) -> EnvAction:
    """Receding-horizon entry point: solve and return the first action."""
    sol = solve_mpc(
        model,
        np.asarray(state.zone_temps),
        forecast,
        reward,
        ac_map,
        max_power,
        f_frozen=f_frozen,
        horizon=horizon,
        **solver_opts,
    )
    return EnvAction(tuple(sol.actions[0]))


class RuleBasedController:
    """Stateless thermostat wrapper with a fixed deadband."""

    def __init__(self, config: EnvConfig, deadband: float = 0.5):
        self.config = config
        self.deadband = deadband

    def act(self, state: EnvState) -> EnvAction:
        return rule_based_action(state, self.config, self.deadband)


class RandomController:
    """Counter-based random policy; the step index is the counter."""

    def __init__(self, config: EnvConfig, seed: int = 0):
        self.dim = config.n_hvac
        self.seed = seed

    def act(self, state: EnvState) -> EnvAction:
        return random_action(self.seed, state.step_index, self.dim)


class MpcController:
    """Receding-horizon MPC against the environment's own model.

    The forecast is read straight from the configured weather (the
    controller is given exact model knowledge). The previous solution,
    shifted by one step, warm-starts the next solve; this only accelerates
    convergence and keeps runs deterministic.
    """

    def __init__(
        self,
        config: EnvConfig,
        horizon: int = 12,
        max_iter: int = 500,
        tol: float = 1e-6,
        warm_start: bool = True,
    ):
        self.config = config
        self.horizon = horizon
        self.max_iter = max_iter
        self.tol = tol
        self.warm_start = warm_start
        self._warm: np.ndarray | None = None
        model = config.discrete_model
        hvac_idx = config.hvac_zone_indices
        self._problem = _StackedMpcProblem(
            model.A_d,
            model.B_d[:, 2 + hvac_idx] * config.max_power,
            hvac_idx,
            horizon,
        )

    def _forecast_from(self, k: int) -> Forecast:
        w = self.config.weather
        idx = np.minimum(np.arange(k, k + self.horizon), len(w) - 1)
        ground = np.array([ground_temp_at(self.config, int(j)) for j in idx])
        return Forecast(
            ground_temp=ground,
            outdoor_temp=w.outdoor_temp[idx],
            ghi=w.ghi[idx],
        )

    def act(self, state: EnvState) -> EnvAction:
        cfg = self.config
        k = state.step_index
        f0 = nonlinear_residual(
            cfg.occupant_coeffs, state.mean_temp, cfg.activity_at(k)
        )
        sol = solve_mpc(
            cfg.discrete_model,
            np.asarray(state.zone_temps),
            self._forecast_from(k),
            cfg.reward,
            cfg.ac_map,
            cfg.max_power,
            f_frozen=f0,
            horizon=self.horizon,
            max_iter=self.max_iter,
            tol=self.tol,
            warm_start=self._warm if self.warm_start else None,
            problem=self._problem,
        )
        if self.warm_start:
            self._warm = np.vstack([sol.actions[1:], sol.actions[-1:]])
        return EnvAction(tuple(sol.actions[0]))


def make_controller(kind: str, config: EnvConfig, **params):
    """Factory used by the benchmark harness and the CLI."""
    kind = kind.replace("_", "-")
    if kind == "rule-based":
        return RuleBasedController(config, deadband=params.get("deadband", 0.5))
    if kind == "random":
        return RandomController(config, seed=params.get("seed", 0))
    if kind == "mpc":
        return MpcController(
            config,
            horizon=params.get("horizon", 12),
            max_iter=params.get("max_iter", 500),
            tol=params.get("tol", 1e-6),
            warm_start=params.get("warm_start", True),
        )
    raise ValueError(f"unknown controller kind {kind!r}")
