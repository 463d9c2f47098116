"""Weak-probe susceptibility in closed form and the quantities derived from it.

All susceptibility routines are vectorised over ``delta1`` and return a
Python ``complex`` for scalar input or a complex ``ndarray`` otherwise; the
real part is the dispersion chi' and the imaginary part the absorption chi''.

The first-order response has the form

    chi = kappa / D,
    D = -d1 - i g31 + (W2^2/4)/(d1 - d2 + i g12) + (W3^2/4)/(d1 + d3 + i g41)

with g31 = gamma3/2, g12 = 0, g41 = gamma4/2 in the amplitude picture and the
general coherence damping rates in the density-matrix picture.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import (
    SPEED_OF_LIGHT,
    DivergingGroupVelocityError,
    DriveConfig,
    InvalidArgumentError,
    ModelParams,
    WindowsMergedError,
    coherence_decay,
)

__all__ = [
    "POLE_EPS",
    "DressedStates",
    "susceptibility_amplitude",
    "susceptibility_density",
    "chi_decomposed",
    "chi_decomposed_printed",
    "group_index_numeric",
    "group_index_window1",
    "group_index_window2",
    "group_index_window2_printed",
    "group_velocity",
    "dressed_states",
]

# Pole tolerance in units of gamma3.
POLE_EPS = 1e-30
DEFAULT_STEP = 1e-6
# |d2 + d3| below this (units of gamma3) means the two windows coincide.
MERGE_EPS = 1e-9


def _as_output(value: np.ndarray, scalar: bool):
    return complex(value) if scalar else value


def _chi(delta1, drive: DriveConfig, params: ModelParams, g31, g12, g41):
    d1 = np.asarray(delta1, dtype=float)
    scalar = d1.ndim == 0
    d1 = np.atleast_1d(d1)
    a = 0.25 * drive.coupling2.rabi**2
    b = 0.25 * drive.coupling3.rabi**2
    eps = POLE_EPS * params.gamma3

    den2 = (d1 - drive.coupling2.detuning) + 1j * g12
    den3 = (d1 + drive.coupling3.detuning) + 1j * g41
    # An undamped coupling term diverges on its two-photon resonance; chi -> 0 there.
    pole = np.zeros(d1.shape, dtype=bool)
    if a != 0:
        pole |= np.abs(den2) < eps
    if b != 0:
        pole |= np.abs(den3) < eps
    safe2 = np.where(np.abs(den2) < eps, 1.0, den2)
    safe3 = np.where(np.abs(den3) < eps, 1.0, den3)

    denom = -d1 - 1j * g31
    if a != 0:
        denom = denom + a / safe2
    if b != 0:
        denom = denom + b / safe3
    chi = np.where(pole, 0.0 + 0.0j, params.kappa / np.where(pole, 1.0, denom))
    return _as_output(chi[0] if scalar else chi, scalar)


def susceptibility_amplitude(delta1, drive: DriveConfig, params: ModelParams):
    """First-order susceptibility from the probability-amplitude equations.

    Excited-state damping enters through d1 -> d1 + i gamma3/2 and
    d1 + d3 -> d1 + d3 + i gamma4/2; the ground states are undamped.
    """
    return _chi(delta1, drive, params, 0.5 * params.gamma3, 0.0, 0.5 * params.gamma4)


def susceptibility_density(delta1, drive: DriveConfig, params: ModelParams):
    """First-order susceptibility from the density-matrix equations with rho11 = 1.

    Identical to :func:`susceptibility_amplitude` when gamma1, gamma2 and
    gamma_c all vanish.
    """
    return _chi(
        delta1,
        drive,
        params,
        coherence_decay(params, 3, 1),
        coherence_decay(params, 1, 2),
        coherence_decay(params, 4, 1),
    )


def _rational_parts(d1, drive: DriveConfig, params: ModelParams):
    """Factors u, v, g, a, b of chi = kappa u (v + i g) / N.

    A coupling laser that is off contributes no resonance factor, so its
    factor is replaced by 1 (this cancels identically between P and N).
    """
    a = 0.25 * drive.coupling2.rabi**2
    b = 0.25 * drive.coupling3.rabi**2
    eps = POLE_EPS * params.gamma3
    if a != 0:
        u = d1 - drive.coupling2.detuning
        u = np.where(np.abs(u) < eps, 0.0, u)
    else:
        u = np.ones_like(d1)
    if b != 0:
        v = d1 + drive.coupling3.detuning
        g = 0.5 * params.gamma4
        if g == 0:
            # same pole snapping as the direct routes
            v = np.where(np.abs(v) < eps, 0.0, v)
    else:
        v = np.ones_like(d1)
        g = 0.0
    return u, v, g, a, b


def chi_decomposed(delta1, drive: DriveConfig, params: ModelParams) -> tuple:
    """Dispersion and absorption ``(chi', chi'')`` as real rational functions.

    Writing the denominator as N = N_re + i N_im,

        N_re = u (g gamma3/2 - v d1) + a v + b u
        N_im = a g - u (v gamma3/2 + g d1)

    with u = d1 - d2, v = d1 + d3, g = gamma4/2, a = W2^2/4, b = W3^2/4, and

        chi'  = kappa u (v N_re + g N_im) / |N|^2
        chi'' = kappa u (g N_re - v N_im) / |N|^2.

    Valid in the undamped-ground-state regime (gamma1 = gamma2 = gamma_c = 0).
    """
    d1 = np.asarray(delta1, dtype=float)
    u, v, g, a, b = _rational_parts(d1, drive, params)
    half3 = 0.5 * params.gamma3
    n_re = u * (g * half3 - v * d1) + a * v + b * u
    n_im = a * g - u * (v * half3 + g * d1)
    norm = n_re**2 + n_im**2
    # norm vanishes only where u = v = 0 with gamma4 = 0 (merged, undamped window).
    safe = np.where(norm == 0, 1.0, norm)
    re = np.where(norm == 0, 0.0, params.kappa * u * (v * n_re + g * n_im) / safe)
    im = np.where(norm == 0, 0.0, params.kappa * u * (g * n_re - v * n_im) / safe)
    if d1.ndim == 0:
        return float(re), float(im)
    return re, im


def chi_decomposed_printed(delta1, drive: DriveConfig, params: ModelParams) -> tuple:
    """The published real/imaginary split, transcribed term by term.

    Kept only to compare against :func:`chi_decomposed`; it has no special
    handling for switched-off coupling lasers.
    """
    d1 = np.asarray(delta1, dtype=float)
    d2 = drive.coupling2.detuning
    d3 = drive.coupling3.detuning
    w2sq = drive.coupling2.rabi**2
    w3sq = drive.coupling3.rabi**2
    g3, g4 = params.gamma3, params.gamma4
    A = (
        (d1 + d3) * w2sq / 4
        - (d2 - d1) * w3sq / 4
        + (d2 - d1) * (d1 * (d1 + d3) - g3 * g4 / 4)
    )
    B = (d2 - d1) * (d1 * g4 / 2 + (d1 + d3) * g3 / 2) + w2sq * g4 / 8
    with np.errstate(invalid="ignore", divide="ignore"):
        re = params.kappa * (d1 - d2) * (A * (d1 + d3) + B * g4 / 2) / (A**2 + B**2)
        im = params.kappa * (d1 - d2) * (A * g4 / 2 - B * (d1 + d3)) / (A**2 + B**2)
    if d1.ndim == 0:
        return float(re), float(im)
    return re, im


def group_index_numeric(
    delta1,
    drive: DriveConfig,
    params: ModelParams,
    step: float | None = None,
    susceptibility: Callable = susceptibility_density,
):
    """Group index 1 + chi'/2 + (nu1/2) dchi'/dnu1 with a central difference.

    nu1 = omega31 + delta1, so d/dnu1 = d/ddelta1.  ``step`` defaults to
    1e-6 gamma3.  chi is continuous through the undamped two-photon
    resonances (it goes to zero there), so the stencil may straddle them.
    """
    h = DEFAULT_STEP * params.gamma3 if step is None else step
    if not h > 0:
        raise InvalidArgumentError("finite-difference step must be positive")
    d1 = np.asarray(delta1, dtype=float)
    chi0 = np.real(susceptibility(d1, drive, params))
    slope = (
        np.real(susceptibility(d1 + h, drive, params))
        - np.real(susceptibility(d1 - h, drive, params))
    ) / (2 * h)
    n_g = 1.0 + 0.5 * chi0 + 0.5 * (params.omega31 + d1) * slope
    return float(n_g) if d1.ndim == 0 else n_g


def group_index_window1(drive: DriveConfig, params: ModelParams) -> float:
    """Group index at the centre of the d1 = d2 window: 1 + 2 kappa (d2 + omega31) / W2^2.

    Does not depend on laser L3.
    """
    omega2 = drive.coupling2.rabi
    if not omega2 > 0:
        raise InvalidArgumentError("the d1 = d2 window needs coupling2 rabi > 0")
    return 1.0 + 2.0 * params.kappa * (drive.coupling2.detuning + params.omega31) / omega2**2


def _check_window2(drive: DriveConfig, params: ModelParams) -> float:
    s = drive.coupling2.detuning + drive.coupling3.detuning
    if abs(s) <= MERGE_EPS * params.gamma3:
        raise WindowsMergedError(
            "windows-merged: d2 = -d3, the d1 = -d3 window coincides with d1 = d2"
        )
    return s


def group_index_window2(drive: DriveConfig, params: ModelParams) -> float:
    """Group index at the centre of the d1 = -d3 window, in closed form.

    With s = d2 + d3, g = gamma4/2, c = gamma3/2 the denominator of chi and
    its d1-derivative at d1 = -d3 are

        N  = -alpha + i beta,
        alpha = s (W3^2 + gamma3 gamma4) / 4,   beta = g (W2^2/4 - d3 s),
        N' = (W2^2 + W3^2 + gamma3 gamma4)/4 - d3 s + i (s (c + g) + g d3),

    and, with Q = alpha^2 + beta^2,

        chi'(-d3)  = -kappa s g beta / Q
        dchi'/dd1  = kappa [(s alpha + g beta)/Q
                            - s g (Im N' (alpha^2 - beta^2) + 2 alpha beta Re N') / Q^2].

    Requires Omega3 > 0 and d2 != -d3; ground-state damping is neglected.
    """
    if not drive.coupling3.rabi > 0:
        raise InvalidArgumentError("the d1 = -d3 window needs coupling3 rabi > 0")
    s = _check_window2(drive, params)
    d3 = drive.coupling3.detuning
    w2sq = drive.coupling2.rabi**2
    w3sq = drive.coupling3.rabi**2
    g = 0.5 * params.gamma4
    c = 0.5 * params.gamma3

    alpha = s * (w3sq + params.gamma3 * params.gamma4) / 4
    beta = g * (w2sq / 4 - d3 * s)
    dn_re = (w2sq + w3sq + params.gamma3 * params.gamma4) / 4 - d3 * s
    dn_im = s * (c + g) + g * d3
    q = alpha**2 + beta**2

    chi_re = -params.kappa * s * g * beta / q
    slope = params.kappa * (
        (s * alpha + g * beta) / q
        - s * g * (dn_im * (alpha**2 - beta**2) + 2 * alpha * beta * dn_re) / q**2
    )
    nu1 = params.omega31 - d3
    return 1.0 + 0.5 * chi_re + 0.5 * nu1 * slope


def group_index_window2_printed(drive: DriveConfig, params: ModelParams) -> float:
    """The published closed form for the d1 = -d3 window, transcribed as printed.

    The symbol in the printed alpha is read as Omega3^2.  Comparison only;
    :func:`group_index_window2` is the validated form.
    """
    s = _check_window2(drive, params)
    d2, d3 = drive.coupling2.detuning, drive.coupling3.detuning
    w2sq = drive.coupling2.rabi**2
    w3sq = drive.coupling3.rabi**2
    g3, g4 = params.gamma3, params.gamma4
    kappa, w31 = params.kappa, params.omega31

    alpha = s * (w3sq + g3 * g4 / 4) / 4
    beta = g4 / 2 * (w2sq / 4 - d3 * s)
    dalpha = (w2sq + w3sq + g3 * g4 / 4) / 4 - d3 * (d3 + 3 * d2)
    dbeta = -d3 * (g4 + g3 / 2) - d2 * (g3 + g4) / 2
    q = alpha**2 + beta**2
    return (
        1.0
        - kappa * s * beta * g4 / (4 * q)
        + kappa * ((w31 - d3) / 2) * (beta * g4 / 2 - s * (alpha + dbeta * g4 / 2)) / q
        + kappa * g4 * ((w31 - d3) / 4) * s * beta * (alpha * dalpha + beta * dbeta) / q**2
    )


def group_velocity(n_g: float) -> float:
    """c / n_g in m/s; negative for a negative (superluminal) group index."""
    if n_g == 0:
        raise DivergingGroupVelocityError("diverging group velocity: n_g = 0")
    return SPEED_OF_LIGHT / n_g


@dataclass(frozen=True)
class DressedStates:
    energies: np.ndarray
    weights3: np.ndarray


def dressed_states(drive: DriveConfig) -> DressedStates:
    """Eigenstates of the coupling-laser Hamiltonian over {|2>, |3>, |4>}.

    Eigenvalues are the probe detunings of the absorption lines; ``weights3``
    is the |3> content of each state, which sets the line strength.
    """
    w2 = 0.5 * drive.coupling2.rabi
    w3 = 0.5 * drive.coupling3.rabi
    m = np.array(
        [
            [drive.coupling2.detuning, w2, 0.0],
            [w2, 0.0, w3],
            [0.0, w3, -drive.coupling3.detuning],
        ]
    )
    energies, vectors = np.linalg.eigh(m)
    return DressedStates(energies, np.abs(vectors[1, :]) ** 2)
