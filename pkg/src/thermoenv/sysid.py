"""Data-driven next-state model: least-squares regression on logged steps.

Feature rows are X = [x[k], u[k], Tmean^2] with target Y = x[k+1]; the
squared mean temperature stands in for the occupant nonlinearity so a linear
fit can track it. Fitting is plain (optionally ridge-regularized) least
squares with an unpenalized intercept.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigurationError, Trajectory
from .environment import EnvConfig, scale_action

__all__ = [
    "RegressionDataset",
    "LinearModel",
    "SysidMetrics",
    "collect",
    "fit",
    "predict",
    "evaluate",
]


@dataclass(frozen=True, eq=False)
class RegressionDataset:
    """N feature rows [x, u, Tmean^2 (, metabolic)] and N next-state targets."""

    features: np.ndarray
    targets: np.ndarray
    zone_count: int
    includes_metabolic: bool = False

    def __post_init__(self):
        X = np.asarray(self.features, dtype=float)
        Y = np.asarray(self.targets, dtype=float)
        if X.ndim != 2 or Y.ndim != 2 or X.shape[0] != Y.shape[0]:
            raise ConfigurationError(
                f"features {X.shape} and targets {Y.shape} must share row counts"
            )
        m = self.zone_count
        expected = m + (m + 3) + 1 + (1 if self.includes_metabolic else 0)
        if X.shape[1] != expected or Y.shape[1] != m:
            raise ConfigurationError(
                f"expected feature width {expected} and target width {m}, "
                f"got {X.shape[1]} and {Y.shape[1]}"
            )
        X.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "targets", Y)

    def __len__(self) -> int:
        return self.features.shape[0]


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Affine next-state predictor y = W @ features + b."""

    W: np.ndarray
    b: np.ndarray
    includes_metabolic: bool = False

    def __post_init__(self):
        W = np.asarray(self.W, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
            raise ConfigurationError("model coefficients must be finite")
        if W.ndim != 2 or b.shape != (W.shape[0],):
            raise ConfigurationError(f"inconsistent shapes W {W.shape}, b {b.shape}")
        W.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "b", b)

    @property
    def zone_count(self) -> int:
        return self.W.shape[0]

    def to_dict(self) -> dict:
        return {
            "W": self.W.tolist(),
            "b": self.b.tolist(),
            "includes_metabolic": self.includes_metabolic,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LinearModel":
        return cls(np.array(d["W"]), np.array(d["b"]), d.get("includes_metabolic", False))


def _feature_row(x, u, metabolic=None) -> np.ndarray:
    tmean = float(np.mean(x))
    parts = [np.asarray(x, dtype=float), np.asarray(u, dtype=float), [tmean * tmean]]
    if metabolic is not None:
        parts.append([float(metabolic)])
    return np.concatenate(parts)


def collect(
    trajectory: Trajectory,
    config: EnvConfig,
    include_metabolic: bool = False,
) -> RegressionDataset:
    """One regression row per consecutive record pair.

    The input vector is rebuilt from each record's logged exogenous values
    and its normalized action rescaled through the config's power map.
    ``include_metabolic`` appends the activity-schedule value as an extra
    feature (off by default; the squared-mean-temperature feature already
    covers the standard layout).
    """
    if len(trajectory) < 2:
        raise ConfigurationError(
            f"need at least 2 steps to build a dataset, got {len(trajectory)}"
        )
    rows, targets = [], []
    for rec, rec_next in zip(trajectory.records, trajectory.records[1:]):
        s = rec.state
        powers, _, _ = scale_action(rec.action, config)
        u = np.concatenate([[s.ground_temp, s.outdoor_temp], powers, [s.ghi]])
        metabolic = config.activity_at(s.step_index) if include_metabolic else None
        rows.append(_feature_row(s.zone_temps, u, metabolic))
        targets.append(rec_next.state.zone_temps)
    return RegressionDataset(
        features=np.array(rows),
        targets=np.array(targets),
        zone_count=config.zone_count,
        includes_metabolic=include_metabolic,
    )


def fit(dataset: RegressionDataset, ridge: float = 0.0) -> LinearModel:
    """Least squares (ridge-regularized for ridge > 0) with an unpenalized
    intercept, solved by orthogonal factorization on centered data.

    Raises when ridge = 0 and the centered features are rank deficient;
    a small positive ridge resolves that.
    """
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    X, Y = dataset.features, dataset.targets
    n, p = X.shape
    if n < p:
        raise ConfigurationError(
            f"need at least {p} rows to fit {p} coefficients per zone, got {n}"
        )
    x_mean = X.mean(axis=0)
    y_mean = Y.mean(axis=0)
    Xc = X - x_mean
    Yc = Y - y_mean
    if ridge == 0.0:
        rank = np.linalg.matrix_rank(Xc)
        if rank < p:
            raise ConfigurationError(
                f"feature matrix is rank deficient ({rank} < {p}); "
                "constant or collinear columns present - refit with ridge > 0"
            )
        Wt, *_ = np.linalg.lstsq(Xc, Yc, rcond=None)
    else:
        Xa = np.vstack([Xc, np.sqrt(ridge) * np.eye(p)])
        Ya = np.vstack([Yc, np.zeros((p, Y.shape[1]))])
        Wt, *_ = np.linalg.lstsq(Xa, Ya, rcond=None)
    W = Wt.T
    b = y_mean - W @ x_mean
    return LinearModel(W=W, b=b, includes_metabolic=dataset.includes_metabolic)


def predict(model: LinearModel, x, u, metabolic: float | None = None) -> np.ndarray:
    """Next zone temperatures for state x and input u."""
    row = _feature_row(x, u, metabolic if model.includes_metabolic else None)
    if row.shape != (model.W.shape[1],):
        raise ValueError(
            f"feature width {row.shape[0]} does not match model width {model.W.shape[1]}"
        )
    return model.W @ row + model.b


@dataclass(frozen=True)
class SysidMetrics:
    one_step_rmse_c: float
    rollout_rmse_c: float
    horizon: int

    def to_dict(self) -> dict:
        return {
            "one_step_rmse_c": self.one_step_rmse_c,
            "rollout_rmse_c": self.rollout_rmse_c,
            "horizon": self.horizon,
        }


def evaluate(
    model: LinearModel,
    trajectory: Trajectory,
    config: EnvConfig,
    horizon: int = 24,
) -> SysidMetrics:
    """One-step RMSE over every transition plus multi-step rollout RMSE.

    Rollouts restart at every index, feed predictions back as states (the
    squared-mean feature is recomputed from the prediction), and keep the
    logged inputs.
    """
    dataset = collect(trajectory, config, include_metabolic=model.includes_metabolic)
    n = len(dataset)
    if n <= horizon:
        raise ConfigurationError(
            f"trajectory too short: {n} transitions for rollout horizon {horizon}"
        )
    X, Y = dataset.features, dataset.targets
    preds = X @ model.W.T + model.b
    one_step = float(np.sqrt(np.mean((preds - Y) ** 2)))

    m = dataset.zone_count
    u_width = m + 3
    sq_errors = []
    for start in range(n - horizon + 1):
        x_hat = X[start, :m].copy()
        for h in range(horizon):
            row = X[start + h]
            metabolic = row[-1] if model.includes_metabolic else None
            u = row[m : m + u_width]
            x_hat = predict(model, x_hat, u, metabolic)
            sq_errors.append((x_hat - Y[start + h]) ** 2)
    rollout = float(np.sqrt(np.mean(sq_errors)))
    return SysidMetrics(one_step_rmse_c=one_step, rollout_rmse_c=rollout, horizon=horizon)
