"""Independent reference implementations used to check the engine.

Everything here is deliberately written from the physics, not by calling the
package code: per-zone energy-balance derivatives, RK4 integration, an
eigendecomposition matrix exponential, and a brute-force grid search for the
scalar MPC problem.
"""

import math

import numpy as np


def occupant_heat_poly(c, t, m):
    """Term-by-term evaluation of the per-person sensible heat polynomial."""
    return math.fsum(
        [
            c[0],
            c[1] * m,
            c[2] * m * m,
            c[3] * t,
            -c[4] * t * m,
            c[5] * t * m * m,
            -c[6] * t * t,
            c[7] * t * t * m,
            -c[8] * t * t * m * m,
        ]
    )


def zone_derivatives(
    topology,
    params,
    solar,
    coeffs,
    temps,
    t_ground,
    t_outdoor,
    powers,
    ghi,
    metabolic,
    f_value=None,
):
    """Direct per-zone energy balance, bypassing the matrix assembly.

    ``f_value`` freezes the nonlinear occupant term; None evaluates the full
    polynomial at the instantaneous mean temperature (the linear-in-mean part
    is always live either way, matching how the state matrix treats it).
    """
    m = topology.zone_count
    temps = np.asarray(temps, dtype=float)
    tbar = float(np.mean(temps))
    c4 = coeffs.c[3]
    out = np.zeros(m)
    for zone in topology.zones:
        i = zone.id - 1
        q = 0.0
        for j in topology.neighbors(zone.id):
            r = params.pair_resistance(zone.id, j)
            q += (temps[j - 1] - temps[i]) / r
        rg = params.resistance_ground.get(zone.id)
        if rg is not None:
            q += (solar.ground_weight * t_ground - temps[i]) / rg
        re = params.resistance_exterior.get(zone.id)
        if re is not None:
            q += (t_outdoor - temps[i]) / re
        if zone.hvac_present:
            q += zone.hvac_efficiency * powers[i]
        q += solar.shgc_weight * solar.shgc * zone.window_area * ghi
        if f_value is None:
            q += zone.occupancy * occupant_heat_poly(coeffs.c, tbar, metabolic)
        else:
            q += zone.occupancy * (c4 * tbar + f_value)
        out[i] = q / params.capacitance[i]
    return out


def rk4(f, x0, total_time, substep):
    """Classic fixed-step RK4 for dx/dt = f(x)."""
    x = np.array(x0, dtype=float)
    steps = int(round(total_time / substep))
    h = total_time / steps
    for _ in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return x


def expm_symmetric(A, t):
    """exp(A t) for symmetric A via eigendecomposition."""
    w, q = np.linalg.eigh(np.asarray(A, dtype=float))
    return q @ np.diag(np.exp(w * t)) @ q.T


def mpc_grid_search(a_d, b_hvac, c_seq, x0, target, beta, grid):
    """Exhaustive search of the 3-step scalar MPC objective over a grid.

    Returns (best actions, best objective). Uses the exact (unsmoothed)
    norms of the scalar problem.
    """
    g = np.asarray(grid)
    best = (None, np.inf)
    for a0 in g:
        x1 = a_d * x0 + b_hvac * a0 + c_seq[0]
        j0 = (1 - beta) * abs(a0) + beta * abs(x1 - target)
        x2_base = a_d * x1 + c_seq[1]
        for a1 in g:
            x2 = x2_base + b_hvac * a1
            j1 = j0 + (1 - beta) * abs(a1) + beta * abs(x2 - target)
            # vectorize the innermost level
            x3 = a_d * x2 + b_hvac * g + c_seq[2]
            j2 = j1 + (1 - beta) * np.abs(g) + beta * np.abs(x3 - target)
            idx = int(np.argmin(j2))
            if j2[idx] < best[1]:
                best = ((float(a0), float(a1), float(g[idx])), float(j2[idx]))
    return best
