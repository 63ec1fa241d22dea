import numpy as np
import pytest

from thermoenv import (
    BoundarySurface,
    BuildingTopology,
    EnvConfig,
    OccupantHeatCoefficients,
    RewardConfig,
    SharedWall,
    SolarParameters,
    ThermalParameters,
    WeatherSeries,
    ZoneSpec,
    assemble_continuous,
    default_occupant_coefficients,
    discretize,
)


@pytest.fixture
def coeffs():
    return default_occupant_coefficients()


def constant_weather(steps, temp=20.0, ghi=0.0, ground=20.0, dt=3600.0):
    return WeatherSeries(
        timestamps=np.arange(steps) * dt,
        outdoor_temp=np.full(steps, float(temp)),
        ghi=np.full(steps, float(ghi)),
        ground_temp=(float(ground),) * 12,
    )


def single_zone_setup(r=2.0, c=1800.0, occupancy=0.0):
    """One zone coupled to outdoor air only: C dT/dt = (T_E - T)/R + P."""
    topology = BuildingTopology(
        zones=(ZoneSpec(id=1, volume=1.0, is_perimeter=True, occupancy=occupancy),),
        exterior_walls=(BoundarySurface(zone=1, area=1.0, u_factor=1.0 / r),),
    )
    params = ThermalParameters(
        capacitance=(c,),
        resistance_exterior={1: r},
    )
    solar = SolarParameters(shgc=0.252, shgc_weight=0.1, ground_weight=1.0)
    return topology, params, solar


def make_config(
    topology,
    params,
    solar,
    coeffs,
    weather,
    dt=3600.0,
    beta=0.8,
    targets=None,
    max_power=8000.0,
    episode_length=None,
    initial_temps="target",
    activity=None,
):
    model = discretize(assemble_continuous(topology, params, solar, coeffs), dt)
    ac = tuple(z.hvac_present for z in topology.zones)
    if targets is None:
        targets = (22.0,) * sum(ac)
    return EnvConfig(
        discrete_model=model,
        weather=weather,
        reward=RewardConfig(beta=beta, target_temps=tuple(targets)),
        max_power=max_power,
        ac_map=ac,
        episode_length=episode_length or (len(weather) - 1),
        occupant_coeffs=coeffs,
        initial_temps=initial_temps,
        activity_schedule=activity,
        occupancy=tuple(z.occupancy for z in topology.zones),
    )


def random_rc_network(rng, m, occupancy=0.0, ensure_attached=True, hvac_prob=0.8):
    """Random connected RC building for property tests.

    Spanning tree plus a few extra walls; every network gets at least one
    ground or exterior attachment when ``ensure_attached``.
    """
    zones = []
    for i in range(1, m + 1):
        zones.append(
            ZoneSpec(
                id=i,
                volume=float(rng.uniform(80, 600)),
                window_area=float(rng.uniform(0, 20)),
                is_ground_floor=bool(rng.random() < 0.5),
                is_perimeter=bool(rng.random() < 0.6),
                occupancy=float(occupancy),
                hvac_present=bool(rng.random() < hvac_prob),
            )
        )
    if ensure_attached and not any(z.is_perimeter or z.is_ground_floor for z in zones):
        zones[0] = ZoneSpec(
            id=1,
            volume=zones[0].volume,
            window_area=zones[0].window_area,
            is_ground_floor=True,
            is_perimeter=zones[0].is_perimeter,
            occupancy=zones[0].occupancy,
            hvac_present=zones[0].hvac_present,
        )
    walls = []
    seen = set()
    for i in range(2, m + 1):
        j = int(rng.integers(1, i))
        walls.append(SharedWall(j, i, float(rng.uniform(5, 60)), float(rng.uniform(0.3, 3.0))))
        seen.add((min(i, j), max(i, j)))
    for _ in range(m):
        a, b = int(rng.integers(1, m + 1)), int(rng.integers(1, m + 1))
        if a != b and (min(a, b), max(a, b)) not in seen:
            walls.append(SharedWall(a, b, float(rng.uniform(5, 60)), float(rng.uniform(0.3, 3.0))))
            seen.add((min(a, b), max(a, b)))
    exterior = tuple(
        BoundarySurface(z.id, float(rng.uniform(20, 120)), float(rng.uniform(0.2, 1.5)))
        for z in zones
        if z.is_perimeter
    )
    ground = tuple(
        BoundarySurface(z.id, float(rng.uniform(20, 200)), float(rng.uniform(0.3, 1.2)))
        for z in zones
        if z.is_ground_floor
    )
    topology = BuildingTopology(
        zones=tuple(zones),
        adjacency=tuple(walls),
        exterior_walls=exterior,
        ground_contact=ground,
    )
    caps = tuple(1206.0 * z.volume * float(rng.uniform(5, 20)) for z in zones)
    resistance = {w.pair: 1.0 / (w.u_factor * w.area) for w in walls}
    params = ThermalParameters(
        capacitance=caps,
        resistance=resistance,
        resistance_ground={s.zone: 1.0 / (s.u_factor * s.area) for s in ground},
        resistance_exterior={s.zone: 1.0 / (s.u_factor * s.area) for s in exterior},
    )
    solar = SolarParameters(
        shgc=float(rng.uniform(0.1, 0.6)),
        shgc_weight=float(rng.uniform(0.0, 1.0)),
        ground_weight=float(rng.uniform(0.0, 1.0)),
    )
    return topology, params, solar
