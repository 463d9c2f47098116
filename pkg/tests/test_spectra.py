import numpy as np
import pytest

from ytype_eit.analytic import dressed_states, susceptibility_amplitude
from ytype_eit.model import DriveConfig, InvalidArgumentError, ModelParams
from ytype_eit.spectra import (
    PRESETS,
    GridSpec,
    count_deep_minima,
    figure_preset,
    find_peaks,
    find_windows,
    run_scan,
    scan_group_index,
    sweep,
)


def preset_sweep(name, **kwargs):
    preset = figure_preset(name)
    return preset, sweep(preset.drive, preset.params, preset.grid, **kwargs)


def test_grid_validation():
    assert len(GridSpec(-1, 1, 2).values()) == 2
    with pytest.raises(InvalidArgumentError, match="at least 2"):
        GridSpec(-1, 1, 1).values()
    with pytest.raises(InvalidArgumentError, match="below stop"):
        GridSpec(1, -1, 10).values()


def test_unknown_preset_lists_names():
    with pytest.raises(InvalidArgumentError, match="fig2a"):
        figure_preset("fig9z")


def test_unknown_method(fig2a):
    with pytest.raises(InvalidArgumentError, match="unknown method"):
        sweep(*fig2a, method="magic")


def test_sweep_matches_direct_call(fig2a, fig2a_grid):
    spectrum = sweep(*fig2a)
    np.testing.assert_array_equal(spectrum.grid, fig2a_grid)
    np.testing.assert_array_equal(spectrum.chi, susceptibility_amplitude(fig2a_grid, *fig2a))
    assert spectrum.spacing == pytest.approx(0.0025)


def test_sweep_is_deterministic(fig2a):
    a = sweep(*fig2a, method="density")
    b = sweep(*fig2a, method="density")
    for field in ("grid", "chi_re", "chi_im", "n_g"):
        assert getattr(a, field).tobytes() == getattr(b, field).tobytes()


def test_full_sweep_close_to_closed_form(fig2a):
    grid = GridSpec(-2, 2, 81)
    full = sweep(*fig2a, grid=grid, method="full", probe_rabi=1e-3)
    exact = sweep(*fig2a, grid=grid)
    assert full.method == "full"
    assert np.max(np.abs(full.chi - exact.chi)) < 1e-4 * np.max(np.abs(exact.chi))


@pytest.mark.parametrize("name", PRESETS)
def test_every_preset_is_passive(name):
    _, spectrum = preset_sweep(name)
    assert np.all(spectrum.chi_im >= 0)


def test_fig2a_windows():
    preset, spectrum = preset_sweep("fig2a")
    windows = {w.kind: w for w in find_windows(spectrum, preset.drive)}
    assert set(windows) == {"window1", "window2"}
    assert windows["window1"].center == pytest.approx(0.5)
    assert windows["window1"].transparent
    # gamma4 > 0 leaves the second window only partly transparent
    assert not windows["window2"].transparent
    assert abs(windows["window2"].center) <= 0.1


def test_fig2b_both_windows_transparent():
    preset, spectrum = preset_sweep("fig2b")
    windows = find_windows(spectrum, preset.drive)
    assert len(windows) == 2
    assert all(w.depth == 0 for w in windows)


@pytest.mark.parametrize("name", ["fig2d_cascade", "fig2d_lambda"])
def test_single_coupling_gives_single_window(name):
    preset, spectrum = preset_sweep(name)
    assert len(find_windows(spectrum, preset.drive)) == 1
    assert count_deep_minima(spectrum) == 1


@pytest.mark.parametrize("name, center", [("fig5a", 0.0), ("fig5b", 0.3)])
def test_raman_condition_merges_windows(name, center):
    preset, spectrum = preset_sweep(name)
    (window,) = find_windows(spectrum, preset.drive)
    assert window.kind == "merged"
    assert window.center == pytest.approx(center, abs=spectrum.spacing)


def test_off_grid_window_warns(fig2a):
    drive, params = fig2a
    spectrum = sweep(drive, params, GridSpec(-3, 0.4, 400))
    with pytest.warns(UserWarning, match="outside the grid"):
        windows = find_windows(spectrum, drive)
    assert [w.kind for w in windows] == ["window2"]


def test_no_couplings_no_windows(two_level):
    spectrum = sweep(*two_level)
    assert find_windows(spectrum, two_level[0]) == []
    np.testing.assert_allclose(find_peaks(spectrum), [0.0], atol=1e-12)


@pytest.mark.parametrize("weak, strong", [("fig3a", "fig3c"), ("fig3e", "fig3g")])
def test_window2_widens_with_coupling3(weak, strong):
    found = []
    for name in (weak, strong):
        preset, spectrum = preset_sweep(name)
        (w2,) = [w for w in find_windows(spectrum, preset.drive) if w.kind == "window2"]
        found.append(w2)
    assert found[1].width > found[0].width
    assert found[1].depth < found[0].depth


def test_peaks_exact_without_upper_decay():
    # With gamma4 = 0 the absorption maxima sit on the dressed energies up to parabola error.
    preset, spectrum = preset_sweep("fig2b")
    peaks = find_peaks(spectrum)
    energies = dressed_states(preset.drive).energies
    assert len(peaks) == 3
    np.testing.assert_allclose(peaks, energies, atol=spectrum.spacing)


def test_peaks_within_shift_with_upper_decay():
    # gamma4 > 0 pulls the outer peaks outward by a few grid steps.
    preset, spectrum = preset_sweep("fig5a")
    peaks = find_peaks(spectrum)
    assert len(peaks) == 2
    root = np.sqrt(0.5**2 + 0.5**2) / 2
    np.testing.assert_allclose(np.abs(peaks), root, atol=0.01)


def test_scan_merged_points_flagged():
    drive = DriveConfig.from_values(omega2=0.5, omega3=1.5, delta3=0.5)
    scan = scan_group_index("delta2", [-0.5, 0.0, 0.5], drive, ModelParams.rb87(), "window2")
    np.testing.assert_array_equal(scan.merged, [True, False, False])
    assert np.isnan(scan.n_g[0])
    assert np.all(np.isfinite(scan.n_g[1:]))


def test_scan_argument_checks(fig2a):
    with pytest.raises(InvalidArgumentError):
        scan_group_index("gamma4", [1.0], *fig2a)
    with pytest.raises(InvalidArgumentError):
        scan_group_index("omega2", [0.0, 1.0], *fig2a)
    with pytest.raises(InvalidArgumentError):
        scan_group_index("omega2", [1.0], *fig2a, window="window3")
    with pytest.raises(InvalidArgumentError, match="not a group-index scan"):
        run_scan(figure_preset("fig2a"))


@pytest.mark.parametrize("name", ["fig4a", "fig4b"])
def test_slow_light_weakens_with_coupling(name):
    scan = run_scan(figure_preset(name, physical_kappa=True))
    assert len(scan.values) == 20
    assert np.all(scan.n_g > 1)
    assert np.all(np.diff(scan.n_g) < 0)


def test_physical_kappa_scaling():
    plain = figure_preset("fig4a")
    physical = figure_preset("fig4a", physical_kappa=True)
    assert plain.params.kappa == 1.0
    assert physical.params.kappa == pytest.approx(3.543e-4, rel=1e-3)
    assert physical.drive == plain.drive


def test_fig5d_sign_change():
    preset, spectrum = preset_sweep("fig5d")
    near = np.abs(spectrum.grid) < 0.1
    centre = np.argmin(np.abs(spectrum.grid))
    assert spectrum.grid[centre] == 0.0
    assert spectrum.n_g[centre] > 0
    assert np.min(spectrum.n_g[near]) < 0
    _, wide = preset_sweep("fig5c")
    assert np.max(spectrum.chi_im[near]) <= 0.1 * np.max(wide.chi_im)
