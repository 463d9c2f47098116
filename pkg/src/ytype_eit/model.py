"""Parameter types, unit conventions and validation for the inverted-Y atom.

Levels are numbered 1..4: |1> and |2> are ground states, |3> the common
intermediate excited state, |4> the upper excited state.  The probe L1
drives 1-3, coupling laser L2 drives 2-3 and coupling laser L3 drives 3-4.

Rates, Rabi frequencies and detunings may be expressed in any consistent
unit.  The convention used throughout the package (and by every figure
preset) is the natural linewidth of |3>, i.e. ``gamma3 == 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

__all__ = [
    "RB87_GAMMA3",
    "RB87_OMEGA31",
    "RB87_KAPPA",
    "SPEED_OF_LIGHT",
    "EITError",
    "InvalidArgumentError",
    "WindowsMergedError",
    "DegenerateSteadyStateError",
    "DivergingGroupVelocityError",
    "ModelParams",
    "LaserField",
    "DriveConfig",
    "coherence_decay",
    "validate",
    "from_physical",
]

# 87Rb D1 line: natural decay rate of 5P1/2 [1/s] and carrier angular frequency [rad/s].
RB87_GAMMA3 = 2.0 * math.pi * 5.75e6
RB87_OMEGA31 = 2.0 * math.pi * 3.771e14
# N |mu13|^2 / (eps0 hbar) for N ~ 1e10-1e11 cm^-3 and mu13 = 2.5e-29 C m [1/s].
RB87_KAPPA = 1.28e4

SPEED_OF_LIGHT = 299_792_458.0


class EITError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgumentError(EITError, ValueError):
    pass


class WindowsMergedError(EITError, ValueError):
    """The two transparency windows coincide (Raman or double resonance)."""


class DegenerateSteadyStateError(EITError, ArithmeticError):
    pass


class DivergingGroupVelocityError(EITError, ZeroDivisionError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Decay rates and scale constants of the atomic medium.

    ``W32`` defaults to ``gamma3 / 2`` (equal branching of |3> into both
    ground states).  ``kappa`` is N|mu13|^2/(eps0 hbar) and ``omega31`` the
    probe carrier frequency, both in the same unit as the rates.  The
    defaults give order-unity spectra (``kappa == gamma3``) with the 87Rb D1
    carrier; use :meth:`rb87` for the physical susceptibility scale.
    """

    gamma3: float = 1.0
    gamma4: float = 0.1
    gamma1: float = 0.0
    gamma2: float = 0.0
    W32: float | None = None
    gamma_c: float = 0.0
    kappa: float = 1.0
    omega31: float = RB87_OMEGA31 / RB87_GAMMA3

    def __post_init__(self):
        if self.W32 is None:
            object.__setattr__(self, "W32", 0.5 * self.gamma3)

    @classmethod
    def rb87(cls, **overrides) -> ModelParams:
        """87Rb D1 medium in units of gamma3, with the physical kappa."""
        values = dict(kappa=RB87_KAPPA / RB87_GAMMA3, omega31=RB87_OMEGA31 / RB87_GAMMA3)
        values.update(overrides)
        return cls(**values)

    def replace(self, **changes) -> ModelParams:
        return replace(self, **changes)

    def decay(self, level: int) -> float:
        return (self.gamma1, self.gamma2, self.gamma3, self.gamma4)[level - 1]


@dataclass(frozen=True)
class LaserField:
    rabi: float = 0.0
    detuning: float = 0.0


@dataclass(frozen=True)
class DriveConfig:
    """Probe L1 plus the two coupling lasers L2 (2-3) and L3 (3-4)."""

    probe: LaserField = field(default_factory=LaserField)
    coupling2: LaserField = field(default_factory=LaserField)
    coupling3: LaserField = field(default_factory=LaserField)

    @classmethod
    def from_values(
        cls,
        omega2: float = 0.0,
        delta2: float = 0.0,
        omega3: float = 0.0,
        delta3: float = 0.0,
        omega1: float = 0.0,
        delta1: float = 0.0,
    ) -> DriveConfig:
        return cls(
            LaserField(omega1, delta1),
            LaserField(omega2, delta2),
            LaserField(omega3, delta3),
        )

    def with_probe(self, rabi: float | None = None, detuning: float | None = None) -> DriveConfig:
        probe = LaserField(
            self.probe.rabi if rabi is None else rabi,
            self.probe.detuning if detuning is None else detuning,
        )
        return replace(self, probe=probe)

    def replace(self, **changes) -> DriveConfig:
        """Replace fields by short names: omega1..3, delta1..3, or whole lasers."""
        lasers = {"probe": self.probe, "coupling2": self.coupling2, "coupling3": self.coupling3}
        short = {"1": "probe", "2": "coupling2", "3": "coupling3"}
        for key, value in changes.items():
            if key in lasers:
                lasers[key] = value
            elif key[:-1] in ("omega", "delta") and key[-1] in short:
                name = short[key[-1]]
                attr = "rabi" if key.startswith("omega") else "detuning"
                lasers[name] = replace(lasers[name], **{attr: value})
            else:
                raise InvalidArgumentError(f"unknown drive field {key!r}")
        return DriveConfig(**lasers)


def coherence_decay(params: ModelParams, i: int, j: int) -> float:
    """Damping rate of the coherence rho_ij: (gamma_i + gamma_j)/2 + gamma_c."""
    if i == j:
        raise InvalidArgumentError(f"coherence decay needs two distinct levels, got ({i}, {j})")
    if not (1 <= i <= 4 and 1 <= j <= 4):
        raise InvalidArgumentError(f"levels must be in 1..4, got ({i}, {j})")
    return 0.5 * (params.decay(i) + params.decay(j)) + params.gamma_c


def validate(params: ModelParams, drive: DriveConfig | None = None) -> list[str]:
    """Return every violated invariant as a readable message; empty means valid."""
    problems = []
    values = {
        "gamma1": params.gamma1,
        "gamma2": params.gamma2,
        "gamma3": params.gamma3,
        "gamma4": params.gamma4,
        "W32": params.W32,
        "gamma_c": params.gamma_c,
        "kappa": params.kappa,
        "omega31": params.omega31,
    }
    for name, value in values.items():
        if not math.isfinite(value):
            problems.append(f"{name} must be finite")
    if params.gamma3 <= 0:
        problems.append("gamma3 must be positive")
    for name in ("gamma1", "gamma2", "gamma4", "W32", "gamma_c"):
        if values[name] < 0:
            problems.append(f"{name} must be non-negative")
    if params.W32 > params.gamma3:
        problems.append("W32 exceeds gamma3")
    if params.kappa <= 0:
        problems.append("kappa must be positive")
    if params.omega31 <= 0:
        problems.append("omega31 must be positive")

    if drive is not None:
        for name in ("probe", "coupling2", "coupling3"):
            laser = getattr(drive, name)
            if not (math.isfinite(laser.rabi) and math.isfinite(laser.detuning)):
                problems.append(f"{name} rabi and detuning must be finite")
            elif laser.rabi < 0:
                problems.append(f"{name} rabi must be non-negative")
    return problems


def from_physical(gamma3: float, kappa: float, omega31: float, **relative) -> ModelParams:
    """Build parameters in gamma3 units.

    ``gamma3`` [1/s], ``kappa`` [1/s] and ``omega31`` [rad/s] are absolute;
    the remaining rate fields in ``relative`` are already in units of gamma3.
    """
    if not gamma3 > 0:
        raise InvalidArgumentError("gamma3 must be positive")
    return ModelParams(gamma3=1.0, kappa=kappa / gamma3, omega31=omega31 / gamma3, **relative)
