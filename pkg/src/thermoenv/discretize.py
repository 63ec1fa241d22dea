"""Zero-order-hold discretization via the matrix exponential.

The exponential uses scaling-and-squaring with a degree-13 Pade approximant
(coefficients as in Higham's algorithm), which is accurate to machine
precision for the norm range RC networks produce. Input integrals come from
the augmented-matrix trick

    exp([[A, G], [0, 0]] * dt) = [[A_d, int_0^dt exp(A tau) dtau * G], [0, I]]

which stays exact when A is singular (a building with no ground/outdoor
attachment has zero row sums), unlike the textbook A^{-1}(A_d - I)G form.
"""

from __future__ import annotations

import math

import numpy as np

from .core import ContinuousModel, DiscreteModel

__all__ = ["matrix_exponential", "discretize"]

# Pade-13 numerator coefficients b_0..b_13
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def _expm_pade13(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    ident = np.eye(n)
    b = _PADE13
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (
        A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
        + b[7] * A6
        + b[5] * A4
        + b[3] * A2
        + b[1] * ident
    )
    V = (
        A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
        + b[6] * A6
        + b[4] * A4
        + b[2] * A2
        + b[0] * ident
    )
    return np.linalg.solve(V - U, V + U)


def matrix_exponential(A: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(A*t) by scaling-and-squaring with Pade-13 evaluation."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix_exponential needs a square matrix, got {A.shape}")
    if not np.all(np.isfinite(A)) or not math.isfinite(t):
        raise ValueError("matrix_exponential needs finite input")
    M = A * t
    norm = np.linalg.norm(M, 1)
    if norm == 0.0:
        return np.eye(A.shape[0])
    s = 0
    if norm > _THETA13:
        s = int(math.ceil(math.log2(norm / _THETA13)))
        M = M / (2.0**s)
    E = _expm_pade13(M)
    for _ in range(s):
        E = E @ E
    return E


def discretize(model: ContinuousModel, dt: float) -> DiscreteModel:
    """ZOH-discretize the continuous system at sample time dt (seconds)."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    m = model.zone_count
    G = np.hstack([model.B, model.D.reshape(m, 1)])  # inputs plus nonlinearity
    width = G.shape[1]
    aug = np.zeros((m + width, m + width))
    aug[:m, :m] = model.A
    aug[:m, m:] = G
    E = matrix_exponential(aug, dt)
    A_d = E[:m, :m]
    Gd = E[:m, m:]
    return DiscreteModel(A_d=A_d, B_d=Gd[:, :-1], D_d=Gd[:, -1], dt=dt)
