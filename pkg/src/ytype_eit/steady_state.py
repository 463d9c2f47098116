"""Full steady state of the four-level master equation, to all orders in the probe.

The density-matrix equations are assembled into a real 16x16 linear system
over the unknowns

    rho11, rho22, rho33, rho44,
    Re/Im of rho31, rho41, rho12, rho32, rho42, rho43

where the rho11 rate equation is replaced by the trace condition, and the
system is solved directly.  In the weak-probe limit 2 kappa rho31 / Omega1
converges to the closed-form susceptibility.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .model import (
    DegenerateSteadyStateError,
    DriveConfig,
    InvalidArgumentError,
    ModelParams,
    coherence_decay,
    validate,
)

__all__ = [
    "GAMMA2_FLOOR",
    "MAX_CONDITION",
    "COHERENCES",
    "DensityMatrix",
    "LinearSystem",
    "oracle_params",
    "density_rates",
    "build_system",
    "build_systems",
    "solve_steady",
    "solve_steady_grid",
    "susceptibility_full",
]

logger = logging.getLogger(__name__)

GAMMA2_FLOOR = 1e-6
MAX_CONDITION = 1e12
# (row, column) level pairs of the independent coherences, 1-based.
COHERENCES = ((3, 1), (4, 1), (1, 2), (3, 2), (4, 2), (4, 3))
TRACE_ROW = 3


def oracle_params(params: ModelParams) -> ModelParams:
    """Replace gamma2 = 0 by a tiny floor so the steady state is unique."""
    if params.gamma2 == 0:
        floor = GAMMA2_FLOOR * params.gamma3
        logger.info("gamma2 = 0 requested; using gamma2 = %g for the steady-state solve", floor)
        return params.replace(gamma2=floor)
    return params


def density_rates(rho: np.ndarray, drive: DriveConfig, params: ModelParams) -> np.ndarray:
    """Time derivative of rho (shape ``(..., 4, 4)``) in the rotating frame.

    Populations: |4> decays only into |3>, |3> decays at gamma3 with W32 of
    it feeding |2>, |2> decays into |1>.  Coherence rho_ij decays at
    gamma_ij.  drho11 follows from trace conservation.
    """
    w1 = drive.probe.rabi / 2
    w2 = drive.coupling2.rabi / 2
    w3 = drive.coupling3.rabi / 2
    d1 = drive.probe.detuning
    d2 = drive.coupling2.detuning
    d3 = drive.coupling3.detuning
    g2, g3, g4 = params.gamma2, params.gamma3, params.gamma4
    g31 = coherence_decay(params, 3, 1)
    g41 = coherence_decay(params, 4, 1)
    g12 = coherence_decay(params, 1, 2)
    g32 = coherence_decay(params, 3, 2)
    g42 = coherence_decay(params, 4, 2)
    g43 = coherence_decay(params, 4, 3)

    def r(i, j):
        return rho[..., i - 1, j - 1]

    i = 1j
    d44 = i * w3 * (r(3, 4) - r(4, 3)) - g4 * r(4, 4)
    d33 = (
        i * w1 * (r(1, 3) - r(3, 1))
        + i * w3 * (r(4, 3) - r(3, 4))
        + i * w2 * (r(2, 3) - r(3, 2))
        + g4 * r(4, 4)
        - g3 * r(3, 3)
    )
    d22 = i * w2 * (r(3, 2) - r(2, 3)) + params.W32 * r(3, 3) - g2 * r(2, 2)
    d11 = -(d22 + d33 + d44)
    d31 = (
        (i * d1 - g31) * r(3, 1)
        + i * w1 * (r(1, 1) - r(3, 3))
        + i * w3 * r(4, 1)
        + i * w2 * r(2, 1)
    )
    d41 = (i * (d1 + d3) - g41) * r(4, 1) + i * w3 * r(3, 1) - i * w1 * r(4, 3)
    d12 = (i * (d2 - d1) - g12) * r(1, 2) + i * w1 * r(3, 2) - i * w2 * r(1, 3)
    d32 = (
        (i * d2 - g32) * r(3, 2)
        + i * w1 * r(1, 2)
        + i * w3 * r(4, 2)
        + i * w2 * (r(2, 2) - r(3, 3))
    )
    d42 = (i * (d3 + d2) - g42) * r(4, 2) + i * w3 * r(3, 2) - i * w2 * r(4, 3)
    d43 = (
        (i * d3 - g43) * r(4, 3)
        - i * w1 * r(4, 1)
        + i * w3 * (r(3, 3) - r(4, 4))
        - i * w2 * r(4, 2)
    )

    out = np.zeros(np.shape(rho), dtype=complex)
    for k, value in enumerate((d11, d22, d33, d44)):
        out[..., k, k] = value
    for (a, b), value in zip(COHERENCES, (d31, d41, d12, d32, d42, d43)):
        out[..., a - 1, b - 1] = value
        out[..., b - 1, a - 1] = np.conj(value)
    return out


def _unpack(x: np.ndarray) -> np.ndarray:
    """Real unknown vectors ``(..., 16)`` -> Hermitian matrices ``(..., 4, 4)``."""
    rho = np.zeros(x.shape[:-1] + (4, 4), dtype=complex)
    for k in range(4):
        rho[..., k, k] = x[..., k]
    for n, (a, b) in enumerate(COHERENCES):
        value = x[..., 4 + 2 * n] + 1j * x[..., 5 + 2 * n]
        rho[..., a - 1, b - 1] = value
        rho[..., b - 1, a - 1] = np.conj(value)
    return rho


def _pack_rates(drho: np.ndarray) -> np.ndarray:
    """Rate matrices -> real equation rows, ordered rho44, rho33, rho22, rho11, coherences."""
    rows = [drho[..., 3, 3].real, drho[..., 2, 2].real, drho[..., 1, 1].real, drho[..., 0, 0].real]
    for a, b in COHERENCES:
        rows.append(drho[..., a - 1, b - 1].real)
        rows.append(drho[..., a - 1, b - 1].imag)
    return np.stack(rows, axis=-1)


def _coefficients(drive: DriveConfig, params: ModelParams) -> np.ndarray:
    basis = _unpack(np.eye(16))
    return _pack_rates(density_rates(basis, drive, params)).T


def _rhs() -> np.ndarray:
    rhs = np.zeros(16)
    rhs[TRACE_ROW] = 1.0
    return rhs


@dataclass(frozen=True)
class LinearSystem:
    """Real steady-state equations ``matrix @ x = rhs`` for one probe detuning.

    Rows 0-2 are drho44, drho33, drho22 = 0, row 3 is the trace condition,
    rows 4-15 the real and imaginary parts of the six coherence equations.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    drive: DriveConfig
    params: ModelParams

    @property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.matrix))


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray
    residual: float = 0.0
    condition_number: float = float("nan")

    @property
    def populations(self) -> np.ndarray:
        return self.rho.diagonal().real

    @property
    def trace(self) -> float:
        return float(self.rho.trace().real)

    def element(self, i: int, j: int) -> complex:
        return complex(self.rho[i - 1, j - 1])

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))


def _checked(params: ModelParams, drive: DriveConfig) -> ModelParams:
    problems = validate(params, drive)
    if problems:
        raise InvalidArgumentError("; ".join(problems))
    return oracle_params(params)


def build_system(drive: DriveConfig, params: ModelParams) -> LinearSystem:
    """Steady-state system at the probe detuning carried by ``drive.probe``."""
    params = _checked(params, drive)
    matrix = _coefficients(drive, params)
    matrix[TRACE_ROW] = 0.0
    matrix[TRACE_ROW, :4] = 1.0
    return LinearSystem(matrix, _rhs(), drive, params)


def build_systems(delta1, drive: DriveConfig, params: ModelParams) -> np.ndarray:
    """Stack of coefficient matrices ``(n, 16, 16)`` for an array of probe detunings.

    The equations are linear in delta1, so the matrix is split into a
    detuning-free part and the delta1 coefficient.
    """
    params = _checked(params, drive)
    d1 = np.atleast_1d(np.asarray(delta1, dtype=float))
    fixed = _coefficients(drive.with_probe(detuning=0.0), params)
    # Every term is (parameter x rho), so with all other parameters zero only
    # the delta1 coefficients survive.
    per_delta = _coefficients(
        DriveConfig().with_probe(detuning=1.0), ModelParams(gamma3=0.0, gamma4=0.0, W32=0.0)
    )
    matrices = fixed[None, :, :] + d1[:, None, None] * per_delta[None, :, :]
    matrices[:, TRACE_ROW, :] = 0.0
    matrices[:, TRACE_ROW, :4] = 1.0
    return matrices


def _solve(matrices: np.ndarray, drive: DriveConfig, params: ModelParams):
    rhs = _rhs()
    cond = np.linalg.cond(matrices)
    bad = ~np.isfinite(cond) | (cond > MAX_CONDITION)
    if np.any(bad):
        worst = float(np.max(np.where(np.isfinite(cond), cond, np.inf)))
        raise DegenerateSteadyStateError(
            f"degenerate steady state (condition number {worst:.3g}) for {drive} with {params}"
        )
    x = np.linalg.solve(matrices, np.broadcast_to(rhs, matrices.shape[:-1])[..., None])[..., 0]
    residual = np.max(np.abs(np.einsum("nij,nj->ni", matrices, x) - rhs), axis=-1)
    return x, residual, cond


def solve_steady(system: LinearSystem) -> DensityMatrix:
    """Direct LU solve of one steady-state system."""
    x, residual, cond = _solve(system.matrix[None], system.drive, system.params)
    return DensityMatrix(_unpack(x[0]), float(residual[0]), float(cond[0]))


def solve_steady_grid(delta1, drive: DriveConfig, params: ModelParams) -> list[DensityMatrix]:
    matrices = build_systems(delta1, drive, params)
    x, residual, cond = _solve(matrices, drive, params)
    rho = _unpack(x)
    return [DensityMatrix(rho[n], float(residual[n]), float(cond[n])) for n in range(len(x))]


def susceptibility_full(drive: DriveConfig, params: ModelParams, delta1=None):
    """chi = 2 kappa rho31 / Omega1 from the full steady state.

    Evaluated at ``drive.probe.detuning``, or over the array ``delta1`` when
    given (complex ndarray result).
    """
    omega1 = drive.probe.rabi
    if not omega1 > 0:
        raise InvalidArgumentError("probe must be nonzero for full solve")
    if delta1 is None:
        rho = solve_steady(build_system(drive, params)).rho
        return complex(2 * params.kappa * rho[2, 0] / omega1)
    matrices = build_systems(delta1, drive, params)
    x, _, _ = _solve(matrices, drive, params)
    rho31 = x[:, 4] + 1j * x[:, 5]
    chi = 2 * params.kappa * rho31 / omega1
    return chi if np.ndim(delta1) else complex(chi[0])
