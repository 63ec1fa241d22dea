import numpy as np
import pytest

from thermoenv import (
    ConfigurationError,
    EnvAction,
    EnvState,
    Trajectory,
    TrajectoryRecord,
    collect,
    evaluate,
    fit,
    predict,
)
from thermoenv.sysid import LinearModel, RegressionDataset

from conftest import constant_weather, make_config, random_rc_network


def linear_episode(config, rng, steps, excite_exogenous=True):
    """Synthesize a trajectory by iterating the exact discrete model with
    persistently exciting actions and exogenous inputs (n = 0, so f drops)."""
    model = config.discrete_model
    m = config.zone_count
    x = rng.uniform(18, 26, m)
    records = []
    for k in range(steps):
        if excite_exogenous:
            tg, te, ghi = rng.uniform(5, 25), rng.uniform(0, 35), rng.uniform(0, 900)
        else:
            tg, te, ghi = 20.0, 20.0, 0.0
        a = rng.uniform(-1, 1, config.n_hvac)
        powers = np.zeros(m)
        powers[config.hvac_zone_indices] = a * config.max_power
        state = EnvState(tuple(x), 70.0, tg, te, ghi, step_index=k)
        records.append(
            TrajectoryRecord(
                state=state,
                action=EnvAction(tuple(a)),
                reward=0.0,
                energy_j=float(config.discrete_model.dt * np.abs(powers).sum()),
                comfort_dev_c=0.0,
            )
        )
        u = np.concatenate([[tg, te], powers, [ghi]])
        x = model.A_d @ x + model.B_d @ u
    # closing record so the last transition has a target
    records.append(
        TrajectoryRecord(
            state=EnvState(tuple(x), 70.0, 20.0, 20.0, 0.0, step_index=steps),
            action=EnvAction((0.0,) * config.n_hvac),
            reward=0.0,
            energy_j=0.0,
            comfort_dev_c=0.0,
        )
    )
    return Trajectory(records=tuple(records), dt=model.dt)


@pytest.fixture
def linear_setup(coeffs):
    # every zone gets HVAC so all power columns are identifiable
    rng = np.random.default_rng(101)
    topo, params, solar = random_rc_network(rng, 3, hvac_prob=1.0)
    weather = constant_weather(600, temp=20.0)
    config = make_config(topo, params, solar, coeffs, weather)
    return config, rng


class TestCollect:
    def test_row_count_is_pairs(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 24)  # 25 records
        ds = collect(traj, config)
        assert len(ds) == 24

    def test_squared_mean_feature(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 3)
        ds = collect(traj, config)
        for row, rec in zip(ds.features, traj.records):
            tbar = np.mean(rec.state.zone_temps)
            assert row[-1] == pytest.approx(tbar * tbar, rel=1e-15)

    def test_feature_width_layout(self, linear_setup):
        config, rng = linear_setup
        m = config.zone_count
        ds = collect(linear_episode(config, rng, 5), config)
        assert ds.features.shape[1] == m + (m + 3) + 1
        ds_r = collect(linear_episode(config, rng, 5), config, include_metabolic=True)
        assert ds_r.features.shape[1] == m + (m + 3) + 2

    def test_too_short_rejected(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 0)  # single record
        with pytest.raises(ConfigurationError, match="at least 2"):
            collect(traj, config)


class TestFit:
    def test_recovers_discrete_model(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 500)
        ds = collect(traj, config)
        model = fit(ds, ridge=0.0)
        m = config.zone_count
        true = np.hstack([config.discrete_model.A_d, config.discrete_model.B_d])
        np.testing.assert_allclose(model.W[:, : 2 * m + 3], true, atol=1e-6)
        residual = ds.features @ model.W.T + model.b - ds.targets
        assert np.sqrt(np.mean(residual**2)) < 1e-8

    def test_zero_targets_give_zero_model(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((40, 10))
        ds = RegressionDataset(
            features=X, targets=np.zeros((40, 3)), zone_count=3
        )
        model = fit(ds, ridge=0.0)
        np.testing.assert_allclose(model.W, 0.0, atol=1e-12)
        np.testing.assert_allclose(model.b, 0.0, atol=1e-12)

    def test_duplicated_rows_leave_model_unchanged(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((50, 10))
        Y = rng.standard_normal((50, 3))
        a = fit(RegressionDataset(X, Y, zone_count=3), ridge=0.0)
        b = fit(
            RegressionDataset(np.vstack([X, X]), np.vstack([Y, Y]), zone_count=3),
            ridge=0.0,
        )
        np.testing.assert_allclose(a.W, b.W, atol=1e-10)
        np.testing.assert_allclose(a.b, b.b, atol=1e-10)

    def test_rank_deficiency_recommends_ridge(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((40, 10))
        X[:, 4] = 7.0  # constant column: zero after centering
        Y = rng.standard_normal((40, 3))
        ds = RegressionDataset(X, Y, zone_count=3)
        with pytest.raises(ConfigurationError, match="ridge > 0"):
            fit(ds, ridge=0.0)
        model = fit(ds, ridge=1e-9)  # and the recommendation works
        assert np.all(np.isfinite(model.W))

    def test_affine_equivariance_in_targets(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((60, 10))
        Y = rng.standard_normal((60, 3))
        shift = np.array([1.5, -2.0, 0.25])
        a = fit(RegressionDataset(X, Y, zone_count=3), ridge=0.0)
        b = fit(RegressionDataset(X, Y + shift, zone_count=3), ridge=0.0)
        np.testing.assert_allclose(a.W, b.W, atol=1e-12)
        np.testing.assert_allclose(a.b + shift, b.b, atol=1e-12)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(4)
        X = rng.standard_normal((80, 10))
        W_true = rng.standard_normal((3, 10))
        Y = X @ W_true.T + rng.standard_normal((80, 3))
        model = fit(RegressionDataset(X, Y, zone_count=3), ridge=0.0)
        r = Y - (X @ model.W.T + model.b)
        assert np.max(np.abs(X.T @ r)) / len(X) < 1e-8

    def test_needs_enough_rows(self):
        ds = RegressionDataset(np.ones((3, 10)), np.ones((3, 3)), zone_count=3)
        with pytest.raises(ConfigurationError, match="at least"):
            fit(ds, ridge=0.0)


class TestPredict:
    # two-zone feature width: 2 states + 5 inputs + squared mean = 8
    def test_zero_w_returns_intercept(self):
        model = LinearModel(W=np.zeros((2, 8)), b=np.array([21.0, 22.5]))
        out = predict(model, [20.0, 20.0], [10.0, 15.0, 0.0, 0.0, 100.0])
        np.testing.assert_allclose(out, [21.0, 22.5])

    def test_identity_mapping(self):
        W = np.zeros((2, 8))
        W[:, :2] = np.eye(2)
        model = LinearModel(W=W, b=np.zeros(2))
        out = predict(model, [19.5, 23.0], [0.0, 0.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(out, [19.5, 23.0])

    def test_width_mismatch_raises(self):
        model = LinearModel(W=np.zeros((2, 8)), b=np.zeros(2))
        with pytest.raises(ValueError, match="width"):
            predict(model, [20.0, 21.0, 22.0], [0.0] * 5)

    def test_heldout_one_step_rmse(self, linear_setup):
        config, rng = linear_setup
        train = linear_episode(config, rng, 400)
        test = linear_episode(config, rng, 80)
        model = fit(collect(train, config), ridge=0.0)
        ds = collect(test, config)
        preds = ds.features @ model.W.T + model.b
        rmse = float(np.sqrt(np.mean((preds - ds.targets) ** 2)))
        assert rmse < 1e-6


class TestEvaluate:
    def test_perfect_model_zero_rmse(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 120)
        model = fit(collect(traj, config), ridge=0.0)
        metrics = evaluate(model, traj, config, horizon=12)
        assert metrics.one_step_rmse_c < 1e-8
        assert metrics.rollout_rmse_c < 1e-6

    def test_offset_model_closed_form_rmse(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 60)
        model = fit(collect(traj, config), ridge=0.0)
        m = config.zone_count
        bumped = LinearModel(
            W=model.W, b=model.b + np.eye(m)[0], includes_metabolic=False
        )
        metrics = evaluate(bumped, traj, config, horizon=1)
        assert metrics.one_step_rmse_c == pytest.approx(1.0 / np.sqrt(m), rel=1e-6)

    def test_rollout_rmse_at_least_one_step(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 200)
        exact = fit(collect(traj, config), ridge=0.0)
        noisy = LinearModel(W=exact.W * (1 + 1e-4), b=exact.b)
        metrics = evaluate(noisy, traj, config, horizon=24)
        assert metrics.rollout_rmse_c >= metrics.one_step_rmse_c

    def test_too_short_for_horizon(self, linear_setup):
        config, rng = linear_setup
        traj = linear_episode(config, rng, 10)
        with pytest.raises(ConfigurationError, match="horizon"):
            evaluate(fit(collect(traj, config), ridge=1e-9), traj, config, horizon=50)
