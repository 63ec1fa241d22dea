"""Bundled physical constants.

The defaults live in ``data/constants.json`` so they are configuration, not
code: air density and heat capacity (used to estimate zone capacitance from
volume) and the occupant sensible-heat polynomial coefficients, whose values
come from the EnergyPlus Engineering Reference correlation for people heat
gains.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib.resources import files

from .core import OccupantHeatCoefficients

__all__ = [
    "load_constants",
    "air_volumetric_heat_capacity",
    "default_occupant_coefficients",
]


@lru_cache(maxsize=1)
def load_constants() -> dict:
    text = files("thermoenv.data").joinpath("constants.json").read_text()
    return json.loads(text)


def air_volumetric_heat_capacity() -> float:
    """rho * c_p of indoor air, J/(m^3 K)."""
    k = load_constants()
    return k["air_density_kg_m3"] * k["air_heat_capacity_j_per_kgk"]


def default_occupant_coefficients() -> OccupantHeatCoefficients:
    k = load_constants()
    return OccupantHeatCoefficients(
        c=tuple(k["occupant_heat_coefficients"]),
        metabolic_rate=k["metabolic_rate_w"],
    )
