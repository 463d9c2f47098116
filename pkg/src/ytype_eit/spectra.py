"""Probe-detuning sweeps, window and peak analysis, group-index scans and figure presets."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks as _scipy_find_peaks

from . import analytic
from .model import DriveConfig, InvalidArgumentError, ModelParams
from .steady_state import susceptibility_full

__all__ = [
    "METHODS",
    "PRESETS",
    "GridSpec",
    "SpectrumResult",
    "Window",
    "ScanResult",
    "Preset",
    "sweep",
    "find_windows",
    "find_peaks",
    "count_deep_minima",
    "scan_group_index",
    "figure_preset",
    "run_scan",
]

METHODS = ("amplitude", "density", "full")
TRANSPARENT_DEPTH = 1e-3
PEAK_FRACTION = 0.01
DEFAULT_FULL_PROBE = 1e-3


class GridSpec(NamedTuple):
    start: float = -3.0
    stop: float = 3.0
    points: int = 2401

    def values(self) -> np.ndarray:
        if int(self.points) != self.points or self.points < 2:
            raise InvalidArgumentError(f"grid needs at least 2 points, got {self.points}")
        if not self.start < self.stop:
            raise InvalidArgumentError(f"grid start {self.start} must be below stop {self.stop}")
        return np.linspace(self.start, self.stop, int(self.points))


@dataclass(frozen=True)
class SpectrumResult:
    grid: np.ndarray
    chi_re: np.ndarray
    chi_im: np.ndarray
    n_g: np.ndarray
    method: str

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def chi(self) -> np.ndarray:
        return self.chi_re + 1j * self.chi_im


@dataclass(frozen=True)
class Window:
    kind: str
    center: float
    depth: float
    width: float
    n_g_center: float

    @property
    def transparent(self) -> bool:
        return self.depth < TRANSPARENT_DEPTH


@dataclass(frozen=True)
class ScanResult:
    variable: str
    values: np.ndarray
    n_g: np.ndarray
    window: str
    merged: np.ndarray = field(default=None)


def _full_chi(delta1, drive, params, probe_rabi):
    return susceptibility_full(drive.with_probe(rabi=probe_rabi), params, delta1)


def sweep(
    drive: DriveConfig,
    params: ModelParams,
    grid: GridSpec = GridSpec(),
    method: str = "amplitude",
    probe_rabi: float | None = None,
    step: float | None = None,
) -> SpectrumResult:
    """Susceptibility and group index on a probe-detuning grid.

    ``method='full'`` solves the complete steady state at probe Rabi
    frequency ``probe_rabi`` (falling back to ``drive.probe.rabi``, then to
    1e-3 gamma3).
    """
    x = GridSpec(*grid).values()
    if method == "amplitude":
        chi_fn = analytic.susceptibility_amplitude
    elif method == "density":
        chi_fn = analytic.susceptibility_density
    elif method == "full":
        rabi = probe_rabi or drive.probe.rabi or DEFAULT_FULL_PROBE * params.gamma3
        if not rabi > 0:
            raise InvalidArgumentError("method 'full' needs a positive probe Rabi frequency")

        def chi_fn(delta1, drive, params):
            return _full_chi(delta1, drive, params, rabi)

    else:
        raise InvalidArgumentError(f"unknown method {method!r}; expected one of {METHODS}")

    chi = np.asarray(chi_fn(x, drive, params))
    n_g = analytic.group_index_numeric(x, drive, params, step=step, susceptibility=chi_fn)
    return SpectrumResult(x, chi.real.copy(), chi.imag.copy(), np.asarray(n_g), method)


def _local_minima(y: np.ndarray) -> np.ndarray:
    inner = (y[1:-1] <= y[:-2]) & (y[1:-1] <= y[2:]) & ((y[1:-1] < y[:-2]) | (y[1:-1] < y[2:]))
    return np.flatnonzero(inner) + 1


def _flank(y: np.ndarray, start: int, direction: int) -> int:
    """Index of the first local maximum walking away from ``start``."""
    k = start
    while 0 <= k + direction < len(y) and y[k + direction] >= y[k]:
        k += direction
    return k


def _crossing(x: np.ndarray, y: np.ndarray, start: int, stop: int, level: float) -> float:
    step = 1 if stop > start else -1
    for k in range(start, stop, step):
        if y[k] <= level < y[k + step]:
            frac = (level - y[k]) / (y[k + step] - y[k])
            return float(x[k] + frac * (x[k + step] - x[k]))
    return float(x[stop])


def _window_at(spectrum: SpectrumResult, target: float, kind: str, max_shift: float):
    x, y = spectrum.grid, spectrum.chi_im
    minima = _local_minima(y)
    if minima.size == 0:
        return None
    k = int(minima[np.argmin(np.abs(x[minima] - target))])
    if abs(x[k] - target) > max_shift:
        return None
    left = _flank(y, k, -1)
    right = _flank(y, k, +1)
    # Half of the lower flanking maximum, so the level is crossed on both sides.
    level = 0.5 * min(y[left], y[right])
    if y[k] >= level:
        return None
    width = _crossing(x, y, k, right, level) - _crossing(x, y, k, left, level)
    peak = float(np.max(y))
    return Window(
        kind=kind,
        center=float(x[k]),
        depth=float(y[k] / peak) if peak > 0 else 0.0,
        width=width,
        n_g_center=float(spectrum.n_g[k]),
    )


def find_windows(spectrum: SpectrumResult, drive: DriveConfig, max_shift: float = 0.1) -> list[Window]:
    """Transparency windows near d1 = d2 (window1) and d1 = -d3 (window2).

    A window is the local chi'' minimum nearest its expected centre, no
    further than ``max_shift`` away.  When |d2 + d3| is below the grid
    spacing the two coincide and a single ``merged`` window is reported.
    """
    d2 = drive.coupling2.detuning
    d3 = drive.coupling3.detuning
    has1 = drive.coupling2.rabi > 0
    has2 = drive.coupling3.rabi > 0
    if has1 and has2 and abs(d2 + d3) < spectrum.spacing:
        candidates = [("merged", d2)]
    else:
        candidates = [("window1", d2)] * has1 + [("window2", -d3)] * has2

    windows = []
    lo, hi = spectrum.grid[0], spectrum.grid[-1]
    for kind, target in candidates:
        if not lo <= target <= hi:
            warnings.warn(f"{kind} centre {target:g} lies outside the grid [{lo:g}, {hi:g}]")
            continue
        window = _window_at(spectrum, target, kind, max_shift)
        if window is not None:
            windows.append(window)
    return windows


def find_peaks(spectrum: SpectrumResult) -> np.ndarray:
    """Absorption maxima above 1% of the global maximum, refined by a parabola through three samples."""
    x, y = spectrum.grid, spectrum.chi_im
    idx, _ = _scipy_find_peaks(y, height=PEAK_FRACTION * np.max(y))
    positions = []
    for k in idx:
        y0, y1, y2 = y[k - 1], y[k], y[k + 1]
        curvature = y0 - 2 * y1 + y2
        offset = 0.5 * (y0 - y2) / curvature if curvature != 0 else 0.0
        positions.append(x[k] + offset * (x[k + 1] - x[k]))
    return np.asarray(positions)


def count_deep_minima(spectrum: SpectrumResult, fraction: float = 0.5) -> int:
    """Number of local chi'' minima below ``fraction`` of the global maximum."""
    y = spectrum.chi_im
    minima = _local_minima(y)
    return int(np.sum(y[minima] < fraction * np.max(y)))


_SCAN_FIELDS = {"omega2": "omega2", "omega3": "omega3", "delta2": "delta2"}


def scan_group_index(
    variable: str,
    values,
    drive: DriveConfig,
    params: ModelParams,
    window: str = "window1",
    step: float | None = None,
) -> ScanResult:
    """Group index at a fixed window centre while one coupling parameter varies.

    ``window1`` evaluates at d1 = d2, ``window2`` at d1 = -d3.  Points where
    the windows merge are NaN and flagged in ``merged``.
    """
    if variable not in _SCAN_FIELDS:
        raise InvalidArgumentError(f"scan variable must be one of {sorted(_SCAN_FIELDS)}")
    if window not in ("window1", "window2"):
        raise InvalidArgumentError("window must be 'window1' or 'window2'")
    values = np.asarray(values, dtype=float)
    if variable.startswith("omega") and np.any(values <= 0):
        raise InvalidArgumentError(f"{variable} scan values must be positive")

    n_g = np.empty(values.shape)
    merged = np.zeros(values.shape, dtype=bool)
    for k, value in enumerate(values):
        point = drive.replace(**{_SCAN_FIELDS[variable]: value})
        d2, d3 = point.coupling2.detuning, point.coupling3.detuning
        if abs(d2 + d3) <= analytic.MERGE_EPS * params.gamma3:
            merged[k] = True
            n_g[k] = np.nan
            continue
        center = d2 if window == "window1" else -d3
        n_g[k] = analytic.group_index_numeric(center, point, params, step=step)
    return ScanResult(variable, values, n_g, window, merged)


class Preset(NamedTuple):
    name: str
    drive: DriveConfig
    params: ModelParams
    grid: GridSpec
    scan: tuple | None = None  # (variable, values, window)


def _drive(omega2, delta2, omega3, delta3):
    return DriveConfig.from_values(omega2=omega2, delta2=delta2, omega3=omega3, delta3=delta3)


# name: (Omega2, delta2, Omega3, delta3, gamma4, grid, scan)
_PRESET_TABLE = {
    "fig2a": (0.5, 0.5, 1.0, 0.0, 0.1, None, None),
    "fig2b": (0.5, 0.5, 1.0, 0.0, 0.0, None, None),
    "fig2c": (0.5, 0.0, 2.0, -0.5, 0.1, None, None),
    "fig2d_cascade": (0.0, 0.0, 2.0, -0.5, 0.1, None, None),
    "fig2d_lambda": (0.5, 0.0, 0.0, -0.5, 0.1, None, None),
    "fig3a": (0.5, 0.0, 1.0, -0.5, 0.1, None, None),
    "fig3c": (0.5, 0.0, 1.5, -0.5, 0.1, None, None),
    "fig3e": (1.0, 0.0, 1.0, -0.5, 0.1, None, None),
    "fig3g": (1.0, 0.0, 2.0, -0.5, 0.1, None, None),
    "fig4a": (0.5, 0.3, 1.5, 0.0, 0.1, None, ("omega2", (0.2, 2.0), "window1")),
    "fig4b": (0.5, 0.0, 1.5, 0.5, 0.1, None, ("omega3", (1.0, 3.0), "window2")),
    "fig4c": (0.5, 0.0, 1.5, 0.5, 0.1, None, ("delta2", (-0.4, 1.0), "window2")),
    "fig4d": (0.5, 0.0, 1.0, 0.5, 0.1, None, ("omega2", (0.2, 2.0), "window2")),
    "fig5a": (0.5, 0.0, 0.5, 0.0, 0.1, None, None),
    "fig5b": (0.5, 0.3, 0.5, -0.3, 0.1, None, None),
    "fig5c": (0.5, 0.0, 2.0, 0.0, 0.1, None, None),
    "fig5d": (0.5, 0.0, 2.0, 0.0, 0.1, GridSpec(-0.2, 0.2, 2001), None),
}
PRESETS = tuple(_PRESET_TABLE)
SCAN_POINTS = 20


def figure_preset(name: str, physical_kappa: bool = False) -> Preset:
    """Caption parameters of a published figure panel, in units of gamma3.

    ``kappa`` is 1 (order-unity spectra) unless ``physical_kappa`` asks for
    the 87Rb value, which gives physical group-index magnitudes.
    """
    if name not in _PRESET_TABLE:
        raise InvalidArgumentError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    omega2, delta2, omega3, delta3, gamma4, grid, scan = _PRESET_TABLE[name]
    params = ModelParams.rb87(gamma4=gamma4) if physical_kappa else ModelParams(gamma4=gamma4)
    if scan is not None:
        variable, (lo, hi), window = scan
        scan = (variable, np.linspace(lo, hi, SCAN_POINTS), window)
    return Preset(name, _drive(omega2, delta2, omega3, delta3), params, grid or GridSpec(), scan)


def run_scan(preset: Preset, step: float | None = None) -> ScanResult:
    if preset.scan is None:
        raise InvalidArgumentError(f"preset {preset.name} is not a group-index scan")
    variable, values, window = preset.scan
    return scan_group_index(variable, values, preset.drive, preset.params, window, step=step)

