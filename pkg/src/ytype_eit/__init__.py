"""Weak-probe susceptibility, EIT windows and group index of an inverted-Y four-level atom."""
from .analytic import (
    DressedStates,
    chi_decomposed,
    dressed_states,
    group_index_numeric,
    group_index_window1,
    group_index_window2,
    group_velocity,
    susceptibility_amplitude,
    susceptibility_density,
)
from .model import (
    DriveConfig,
    EITError,
    InvalidArgumentError,
    LaserField,
    ModelParams,
    WindowsMergedError,
    coherence_decay,
    validate,
)
from .spectra import (
    GridSpec,
    SpectrumResult,
    figure_preset,
    find_peaks,
    find_windows,
    scan_group_index,
    sweep,
)
from .steady_state import build_system, solve_steady, susceptibility_full

__version__ = "0.1.0"

__all__ = [
    "DressedStates",
    "chi_decomposed",
    "dressed_states",
    "group_index_numeric",
    "group_index_window1",
    "group_index_window2",
    "group_velocity",
    "susceptibility_amplitude",
    "susceptibility_density",
    "DriveConfig",
    "EITError",
    "InvalidArgumentError",
    "LaserField",
    "ModelParams",
    "WindowsMergedError",
    "coherence_decay",
    "validate",
    "GridSpec",
    "SpectrumResult",
    "figure_preset",
    "find_peaks",
    "find_windows",
    "scan_group_index",
    "sweep",
    "build_system",
    "solve_steady",
    "susceptibility_full",
]
