"""Assembly of the continuous state-space model from a building description.

The zone energy balance is

    C_i dT_i/dt = sum_{j in N(i)} (T_j - T_i)/R_ij + P_hvac_i + Q_occ_i + Q_sol_i

with N(i) spanning adjacent zones plus the ground and outdoor attachments.
Heat sources: P_hvac_i = w_i * P_i (commanded power times efficiency),
Q_occ_i = n_i * Q_person(T_mean, m), Q_sol_i = shgc * window_area_i * ghi.
The per-person sensible heat is a fixed polynomial in the mean zone
temperature and the metabolic rate; its linear-in-T_mean part folds into the
A matrix, the remainder rides along as the scalar nonlinearity f scaled by
the D vector.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .constants import air_volumetric_heat_capacity
from .core import (
    BuildingTopology,
    ConfigurationError,
    ContinuousModel,
    OccupantHeatCoefficients,
    SolarParameters,
    ThermalParameters,
)

__all__ = [
    "surface_key",
    "derive_thermal_parameters",
    "sensible_heat_per_person",
    "nonlinear_residual",
    "assemble_continuous",
]


def surface_key(kind: str, *zones: int) -> str:
    """Stable name for a surface: 'wall:1-2', 'exterior:3', 'ground:1'."""
    if kind == "wall":
        a, b = sorted(zones)
        return f"wall:{a}-{b}"
    (z,) = zones
    return f"{kind}:{z}"


def derive_thermal_parameters(
    topology: BuildingTopology,
    u_factors: Mapping[str, float] | None = None,
) -> ThermalParameters:
    """Turn surface areas and U-factors into resistances, and zone volumes
    into air capacitances.

    R = 1/(U*A) per surface; C_i = rho*c_air*volume_i. ``u_factors`` maps
    surface keys (see :func:`surface_key`) to overrides, and must supply a
    value for any surface whose topology entry left ``u_factor`` unset.
    """
    u_factors = dict(u_factors or {})

    def resolve(key: str, stored: float | None) -> float:
        u = u_factors.get(key, stored)
        if u is None:
            raise ConfigurationError(f"missing U-factor for surface {key}")
        if not u > 0:
            raise ConfigurationError(f"U-factor for {key} must be > 0, got {u}")
        return float(u)

    resistance = {}
    for wall in topology.adjacency:
        u = resolve(surface_key("wall", *wall.pair), wall.u_factor)
        resistance[wall.pair] = 1.0 / (u * wall.area)
    exterior = {}
    for s in topology.exterior_walls:
        u = resolve(surface_key("exterior", s.zone), s.u_factor)
        exterior[s.zone] = 1.0 / (u * s.area)
    ground = {}
    for s in topology.ground_contact:
        u = resolve(surface_key("ground", s.zone), s.u_factor)
        ground[s.zone] = 1.0 / (u * s.area)

    rho_c = air_volumetric_heat_capacity()
    capacitance = tuple(rho_c * z.volume for z in topology.zones)
    return ThermalParameters(
        capacitance=capacitance,
        resistance=resistance,
        resistance_ground=ground,
        resistance_exterior=exterior,
    )


def sensible_heat_per_person(
    coeffs: OccupantHeatCoefficients, mean_temp: float, metabolic: float
) -> float:
    """Per-person sensible heat (W) as a polynomial in mean zone temperature
    T (degC) and metabolic rate m (W/person):

        c1 + c2 m + c3 m^2 + c4 T - c5 T m + c6 T m^2
        - c7 T^2 + c8 T^2 m - c9 T^2 m^2
    """
    c1, c2, c3, c4, c5, c6, c7, c8, c9 = coeffs.c
    t = float(mean_temp)
    m = float(metabolic)
    return (
        c1
        + c2 * m
        + c3 * m * m
        + c4 * t
        - c5 * t * m
        + c6 * t * m * m
        - c7 * t * t
        + c8 * t * t * m
        - c9 * t * t * m * m
    )


def nonlinear_residual(
    coeffs: OccupantHeatCoefficients, mean_temp: float, metabolic: float
) -> float:
    """The sensible-heat polynomial with its linear-in-T term removed; this
    is the part the state matrix cannot absorb and enters the model as f."""
    c4 = coeffs.c[3]
    return sensible_heat_per_person(coeffs, mean_temp, metabolic) - c4 * float(mean_temp)


def assemble_continuous(
    topology: BuildingTopology,
    params: ThermalParameters,
    solar: SolarParameters,
    coeffs: OccupantHeatCoefficients,
) -> ContinuousModel:
    """Build A, B, D for dx/dt = A x + B u + D f.

    Row i of A carries the RC couplings of zone i plus the occupant term
    c4*n_i/(M*C_i) added to every entry of the row (the linear part of
    n_i*Q_person acts through the mean temperature, hence on all columns,
    diagonal included). B columns follow the input layout [T_ground,
    T_outdoor, P_1..P_M, ghi]; the ground column is attenuated by
    ``ground_weight`` and the irradiance column by ``shgc_weight``. The
    corresponding loss conductances stay unattenuated inside A's diagonal.
    """
    m = topology.zone_count
    zones = topology.zones
    caps = np.array(params.capacitance)
    if len(caps) != m:
        raise ConfigurationError(
            f"parameters cover {len(caps)} zones, topology has {m}"
        )

    A = np.zeros((m, m))
    B = np.zeros((m, m + 3))
    D = np.zeros(m)
    c4 = coeffs.c[3]

    for zone in zones:
        i = zone.id - 1
        ci = caps[i]
        diag = 0.0
        for j in topology.neighbors(zone.id):
            try:
                r = params.pair_resistance(zone.id, j)
            except KeyError:
                raise ConfigurationError(
                    f"no resistance for adjacency {tuple(sorted((zone.id, j)))}"
                ) from None
            A[i, j - 1] += 1.0 / (ci * r)
            diag -= 1.0 / (ci * r)
        rg = params.resistance_ground.get(zone.id)
        if rg is not None:
            diag -= 1.0 / (ci * rg)
            B[i, 0] = solar.ground_weight / (ci * rg)
        re = params.resistance_exterior.get(zone.id)
        if re is not None:
            diag -= 1.0 / (ci * re)
            B[i, 1] = 1.0 / (ci * re)
        if diag == 0.0:
            raise ConfigurationError(
                f"zone {zone.id} has no thermal connections (isolated node)"
            )
        A[i, i] += diag
        # occupant linear term on the whole row, diagonal included
        A[i, :] += c4 * zone.occupancy / (m * ci)
        if zone.hvac_present:
            B[i, 2 + i] = zone.hvac_efficiency / ci
        B[i, m + 2] = solar.shgc_weight * solar.shgc * zone.window_area / ci
        D[i] = zone.occupancy / ci

    return ContinuousModel(A=A, B=B, D=D, occupant_coeffs=coeffs, zone_count=m)
