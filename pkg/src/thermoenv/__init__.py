"""thermoenv: RC thermal-network building simulation and control benchmarking.

Build a discrete-time zone-temperature model from a building description,
drive it as an episodic environment, and compare rule-based / MPC / random
controllers (or attach an external RL agent through the NDJSON serve
protocol).
"""

from .benchmark import BenchmarkReport, ControllerSpec, run_benchmark, run_episode
from .constants import default_occupant_coefficients
from .controllers import (
    Forecast,
    MpcController,
    RandomController,
    RuleBasedController,
    make_controller,
    mpc_plan,
    random_action,
    rule_based_action,
    solve_mpc,
)
from .core import (
    BoundarySurface,
    BuildingTopology,
    ConfigurationError,
    ContinuousModel,
    DiscreteModel,
    EnvAction,
    EnvState,
    OccupantHeatCoefficients,
    RewardConfig,
    SharedWall,
    SolarParameters,
    ThermalParameters,
    Trajectory,
    TrajectoryRecord,
    WeatherSeries,
    ZoneSpec,
)
from .discretize import discretize, matrix_exponential
from .dynamics import (
    assemble_continuous,
    derive_thermal_parameters,
    nonlinear_residual,
    sensible_heat_per_person,
)
from .environment import (
    BuildingEnv,
    EnvConfig,
    read_trajectory_csv,
    reset_env,
    reward_l2,
    scale_action,
    step_env,
    write_trajectory_csv,
)
from .scenario import Scenario, bundled_scenarios, find_scenario, load_scenario, load_weather
from .sysid import LinearModel, RegressionDataset, collect, evaluate, fit, predict

__version__ = "0.1.0"
