"""Characteristic tracing and entropy-geometry checks."""

import io

import pytest

from wavetrack import (
    CoefficientField,
    FrontTrackingRun,
    Profile,
    StaticField,
    backward_characteristic,
    burgers_flux,
    export_paths_csv,
    forward_characteristic,
    maximum_principle_check,
    oleinik_report,
)

FLUX = burgers_flux()

LAX = StaticField([(0.0, 0.0)], [0.5, -0.5])
SLOW = StaticField([(0.0, 1.0)], [2.5, 1.5])
RS = StaticField([(0.0, 0.0)], [-0.5, 0.5])


def test_static_field_validation():
    with pytest.raises(ValueError, match="one more value"):
        StaticField([(0.0, 0.0)], [1.0])
    with pytest.raises(ValueError, match="strictly increasing"):
        StaticField([(1.0, 0.0), (0.0, 0.0)], [1.0, 0.5, 0.0])
    with pytest.raises(ValueError, match="one value per region"):
        StaticField([(0.0, 0.0)], [1.0, 0.0], kappa_values=[1.0])


def test_static_field_horizon():
    two = StaticField([(0.0, 1.0), (1.0, 0.0)], [2.0, 0.5, -1.0])
    assert two.horizon == pytest.approx(1.0)
    two.at(0.9)
    with pytest.raises(ValueError, match="beyond the first internal crossing"):
        two.at(1.5)
    # non-converging curves never cross
    assert StaticField([(0.0, 0.0), (1.0, 1.0)], [1.0, 0.5, 2.0]).horizon is None


def test_forward_into_compressive_jump_rides_it():
    path = forward_characteristic(LAX, -1.0, 0.0, 4.0)
    assert path.vertices() == [(0.0, -1.0), (2.0, 0.0), (4.0, 0.0)]
    assert len(path.rides()) == 1
    assert path.end_position == 0.0
    assert path.position_at(1.0) == pytest.approx(-0.5)


def test_forward_crosses_undercompressive_jump():
    # both characteristic families outrun the jump, so the path passes
    # through and continues on the slower side
    path = forward_characteristic(SLOW, 2 / 3, 2 / 3, 2.0)
    assert len(path.rides()) == 0
    assert path.end_position == pytest.approx(8 / 3)


def test_backward_through_undercompressive_jump():
    path = backward_characteristic(SLOW, 8 / 3, 2.0)
    assert path.start_position == pytest.approx(-1.0)
    verts = path.vertices()
    assert len(verts) == 3
    assert verts[1][0] == pytest.approx(2 / 3)
    assert verts[1][1] == pytest.approx(2 / 3)


def test_backward_extremal_feet_straddle_shock():
    lo = backward_characteristic(LAX, 0.0, 1.0, extremal="min")
    hi = backward_characteristic(LAX, 0.0, 1.0, extremal="max")
    assert lo.start_position == pytest.approx(-0.5)
    assert hi.start_position == pytest.approx(0.5)


def test_backward_rejects_rarefaction_capture():
    with pytest.raises(RuntimeError, match="captured by a rarefaction-side"):
        backward_characteristic(RS, 0.25, 1.0)


def test_forward_on_rarefaction_jump_needs_bias():
    with pytest.raises(RuntimeError, match="ambiguous start"):
        forward_characteristic(RS, 0.0, 0.0, 1.0)
    fast = forward_characteristic(RS, 0.0, 0.0, 1.0, tie_bias=1)
    slowp = forward_characteristic(RS, 0.0, 0.0, 1.0, tie_bias=-1)
    assert fast.end_position == pytest.approx(0.5)
    assert slowp.end_position == pytest.approx(-0.5)


def test_path_argument_validation():
    with pytest.raises(ValueError, match="t0 < t_end"):
        forward_characteristic(LAX, 0.0, 1.0, 1.0)
    with pytest.raises(ValueError, match="'min' or 'max'"):
        backward_characteristic(LAX, 0.0, 1.0, extremal="left")
    with pytest.raises(ValueError, match="t_stop < t0"):
        backward_characteristic(LAX, 0.0, 0.0)
    path = forward_characteristic(LAX, -1.0, 0.0, 4.0)
    with pytest.raises(ValueError, match="outside path range"):
        path.position_at(5.0)


def test_oleinik_flags_static_expanding_jump():
    rep = oleinik_report(RS, [0.5, 1.0])
    assert not rep.passed
    assert len(rep.shock_violations) == 2
    assert "expanding jump" in rep.violations[0]
    assert oleinik_report(LAX, [0.5, 1.0]).passed


def test_oleinik_on_single_fan_run():
    run = FrontTrackingRun(FLUX, Profile([0.0], [0.0, 1.0]), 0.25).evolve(2.0)
    rep = oleinik_report(run, [0.5, 1.0, 2.0])
    assert rep.passed
    # discrete fans spread exactly like the exact rarefaction: t du/dx = 1
    assert rep.fan_slope_constant == pytest.approx(1.0)
    assert rep.max_fan_jump == pytest.approx(0.25)
    assert rep.fan_allowance == 0.25


def test_oleinik_on_coupled_field():
    run_I = FrontTrackingRun(FLUX, Profile([0.0], [1.0, -1.0]), 0.1).evolve(2.0)
    run_II = FrontTrackingRun(FLUX, Profile([0.0], [0.0, 1.0]), 0.1).evolve(2.0)
    rep = oleinik_report(CoefficientField(run_I, run_II), [0.5, 1.5])
    assert rep.passed
    assert rep.fan_allowance == pytest.approx(0.1)
    assert rep.max_fan_jump <= rep.fan_allowance + 1e-12


def test_max_principle_on_ordered_pair():
    # run II starts one unit above run I everywhere, so the difference
    # stays positive inside the funnel and its mass is conserved
    run_I = FrontTrackingRun(FLUX, Profile([0.0], [1.0, -1.0]), 0.1).evolve(2.0)
    run_II = FrontTrackingRun(FLUX, Profile([0.013], [2.0, 0.0]), 0.1).evolve(2.0)
    rep = maximum_principle_check(CoefficientField(run_I, run_II), (-1.0, 1.0), 2.0)
    assert rep.passed
    assert rep.min_psi == pytest.approx(1.0)
    assert abs(rep.conservation_drift) <= 1e-10
    assert rep.left_path.t_end == 2.0
    assert rep.back_left.t_start == 0


def test_max_principle_fan_under_constant():
    run_I = FrontTrackingRun(FLUX, Profile([0.0], [0.0, 1.0]), 0.25).evolve(2.0)
    run_II = FrontTrackingRun(FLUX, Profile.constant(2.0), 0.25).evolve(2.0)
    rep = maximum_principle_check(CoefficientField(run_I, run_II), (-1.0, 1.5), 2.0)
    assert rep.passed
    assert rep.min_psi == pytest.approx(1.0)


def test_max_principle_interval_validation():
    run_I = FrontTrackingRun(FLUX, Profile([0.0], [1.0, -1.0]), 0.1).evolve(1.0)
    run_II = FrontTrackingRun(FLUX, Profile.constant(0.0), 0.1).evolve(1.0)
    with pytest.raises(ValueError, match="xi0 < zeta0"):
        maximum_principle_check(CoefficientField(run_I, run_II), (1.0, -1.0), 1.0)


def test_export_paths_csv():
    paths = [forward_characteristic(LAX, -1.0, 0.0, 4.0),
             backward_characteristic(LAX, 0.0, 1.0, extremal="min")]
    buf = io.StringIO()
    export_paths_csv(paths, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "path_id,t,x"
    assert len(lines) == 1 + 3 + 2
    assert lines[1].startswith("0,0.0,-1.0")
