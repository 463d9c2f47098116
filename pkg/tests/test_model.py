import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ytype_eit.model import (
    RB87_GAMMA3,
    RB87_KAPPA,
    RB87_OMEGA31,
    DriveConfig,
    InvalidArgumentError,
    LaserField,
    ModelParams,
    coherence_decay,
    from_physical,
    validate,
)


def test_coherence_decay_examples():
    assert coherence_decay(ModelParams(gamma3=1.0), 3, 1) == 0.5
    assert coherence_decay(ModelParams(gamma4=0.1), 4, 1) == 0.05
    assert coherence_decay(ModelParams(gamma_c=0.02), 1, 2) == 0.02


def test_coherence_decay_rejects_diagonal():
    with pytest.raises(InvalidArgumentError):
        coherence_decay(ModelParams(), 2, 2)
    with pytest.raises(InvalidArgumentError):
        coherence_decay(ModelParams(), 0, 2)


rates = st.floats(0, 10, allow_nan=False)


@given(rates, rates, rates, rates, rates)
def test_coherence_decay_symmetric(g1, g2, g3, g4, gc):
    params = ModelParams(gamma1=g1, gamma2=g2, gamma3=g3 + 0.1, gamma4=g4, gamma_c=gc)
    for i, j in itertools.permutations(range(1, 5), 2):
        assert coherence_decay(params, i, j) == coherence_decay(params, j, i)


@given(st.floats(0.01, 100), st.floats(0, 10))
def test_undamped_ground_reduces_to_half_widths(g3, g4):
    params = ModelParams(gamma3=g3, gamma4=g4)
    assert coherence_decay(params, 3, 1) == g3 / 2
    assert coherence_decay(params, 4, 1) == g4 / 2


def test_validate_examples():
    assert validate(ModelParams(gamma3=1.0), DriveConfig()) == []
    assert "gamma3 must be positive" in validate(ModelParams(gamma3=0.0, W32=0.0))
    assert "W32 exceeds gamma3" in validate(ModelParams(gamma3=1.0, W32=2.0))


def test_validate_collects_every_violation():
    params = ModelParams(gamma3=-1.0, W32=0.0, gamma4=-0.1, kappa=0.0)
    drive = DriveConfig(coupling2=LaserField(-1.0, 0.0))
    problems = validate(params, drive)
    assert "gamma3 must be positive" in problems
    assert "gamma4 must be non-negative" in problems
    assert "kappa must be positive" in problems
    assert "coupling2 rabi must be non-negative" in problems


def test_w32_defaults_to_equal_branching():
    assert ModelParams(gamma3=2.0).W32 == 1.0
    assert ModelParams(gamma3=2.0, W32=0.3).W32 == 0.3


def test_rb87_scale():
    params = ModelParams.rb87()
    assert params.kappa == pytest.approx(RB87_KAPPA / RB87_GAMMA3)
    # kappa / gamma3 is about 3.5e-4 for the Rb D1 line.
    assert params.kappa == pytest.approx(3.54e-4, rel=1e-2)
    assert params.omega31 == pytest.approx(RB87_OMEGA31 / RB87_GAMMA3)


def test_from_physical_normalises_absolute_quantities():
    params = from_physical(3.613e7, 1.28e4, 2.369e15, gamma4=0.1)
    assert params.gamma3 == 1.0
    assert params.gamma4 == 0.1
    assert params.kappa == pytest.approx(1.28e4 / 3.613e7)
    assert params.omega31 == pytest.approx(2.369e15 / 3.613e7)


def test_drive_replace_by_short_names():
    drive = DriveConfig.from_values(omega2=0.5, delta2=0.5, omega3=1.0)
    changed = drive.replace(omega3=2.0, delta2=-0.1)
    assert changed.coupling3 == LaserField(2.0, 0.0)
    assert changed.coupling2 == LaserField(0.5, -0.1)
    assert drive.coupling3.rabi == 1.0
    with pytest.raises(InvalidArgumentError):
        drive.replace(omega5=1.0)


def test_params_are_immutable():
    with pytest.raises(AttributeError):
        ModelParams().gamma3 = 2.0
