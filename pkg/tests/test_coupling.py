import io
import random
from fractions import Fraction

import pytest

from wavetrack.coupling import (
    FAST,
    LAX,
    RAREFACTION_SHOCK,
    SLOW,
    CoefficientField,
    DegenerateFieldError,
    WeightField,
    build_coefficient,
    build_weight,
    classify,
    export_jumps_csv,
)
from wavetrack.fluxes import burgers_flux
from wavetrack.profiles import Profile, profile_difference
from wavetrack.scenarios import random_scenario_pair
from wavetrack.tracking import FrontTrackingRun

FLUX = burgers_flux()


def _field(u1, u2, h=0.1, horizon=2.0, exact=False):
    r1 = FrontTrackingRun(FLUX, u1, h, exact=exact)
    r2 = FrontTrackingRun(FLUX, u2, h, exact=exact)
    r1.evolve(horizon)
    r2.evolve(horizon)
    return CoefficientField(r1, r2)


def test_classify_frozen_cases():
    assert classify(0.5, -0.5, 0.0) == LAX
    assert classify(-0.5, 0.5, 0.0) == RAREFACTION_SHOCK
    assert classify(2.5, 1.5, 1.0) == SLOW
    assert classify(-2.5, -1.5, -1.0) == FAST


def test_classify_snaps_ties_to_undercompressive():
    # gaps inside the tolerance count as zero, which rules out the strict
    # classes: a snapped side can never certify lax or rarefaction-side
    assert classify(1.0 + 1e-12, 0.5, 1.0) == FAST
    assert classify(1.5, 1.0 - 1e-12, 1.0) == SLOW
    assert classify(1.0, 1.0, 1.0) == SLOW
    assert classify(0.5, 1.0, 1.0) == FAST
    assert classify(1.0, 1.0 + 5e-11, 1.0, tol=1e-10) == SLOW


def test_lax_shock_slice():
    field = _field(Profile([0.0], [1.0, -1.0]), Profile.constant(0.0))
    fs = field.at(0.5)
    assert len(fs.jumps) == 1
    j = fs.jumps[0]
    assert j.kind == LAX
    assert j.partition == "I"
    assert j.lam == 0.0
    assert j.a_minus == 0.5 and j.a_plus == -0.5
    assert j.kappa_minus == -1.0 and j.kappa_plus == 1.0
    assert j.b_jump == -2.0          # the owning run's own state jump
    assert j.sign_table_consistent()
    assert fs.psi.values == (-1.0, 1.0)


def test_slow_jump_slice():
    field = _field(Profile([0.0], [2.0, 0.0]), Profile.constant(3.0))
    j = field.at(0.5).jumps[0]
    assert j.kind == SLOW
    assert (j.a_minus, j.a_plus, j.lam) == (2.5, 1.5, 1.0)
    assert j.sign_table_consistent()


def test_partition_two_jump():
    field = _field(Profile.constant(0.0), Profile([0.0], [1.0, -1.0]))
    j = field.at(0.5).jumps[0]
    assert j.partition == "II"
    assert j.kind == LAX
    assert j.b_jump == -2.0          # psi = u2 - u1 jumps with run II
    assert j.sign_table_consistent()


def test_psi_equals_profile_difference():
    rng = random.Random(17)
    p1, p2 = random_scenario_pair(rng, max_jumps=4)
    field = _field(p1, p2)
    fs = field.at(0.0)
    assert fs.psi == profile_difference(p2, p1)


def test_degenerate_coincidence_raises():
    # both runs carry a stationary shock through x=0
    field = _field(Profile([0.0], [1.0, -1.0]), Profile([0.0], [0.5, -0.5]))
    with pytest.raises(DegenerateFieldError, match="Perturb"):
        field.at(0.25)


def test_cross_run_crossing_appears_in_event_times():
    # run I holds a stationary shock at x=0; run II sends one through it
    field = _field(Profile([0.0], [1.0, -1.0]),
                   Profile([-3.0], [2.0, 1.0]), horizon=3.0)
    events = field.event_times(0.0, 3.0)
    assert any(abs(e - 2.0) < 1e-9 for e in events)
    # the crossing instant itself is degenerate, either side is fine
    field.at(1.9)
    field.at(2.1)
    with pytest.raises(DegenerateFieldError):
        field.at(2.0)


def test_event_times_merges_both_runs():
    u1 = Profile([0.0, 1.0], [1.0, 0.0, -1.0])      # collision at t=1
    u2 = Profile([-4.0, -2.0], [1.5, 0.5, -0.5])    # collision at t=4... off range
    field = _field(u1, u2, horizon=2.0)
    events = field.event_times(0.0, 2.0)
    assert events == sorted(events)
    assert any(abs(e - 1.0) < 1e-9 for e in events)


def test_shared_flux_required():
    r1 = FrontTrackingRun(burgers_flux(), Profile([0.0], [1.0, 0.0]), 0.1)
    r2 = FrontTrackingRun(burgers_flux(coefficient=2),
                          Profile([0.5], [1.0, 0.0]), 0.1)
    r1.evolve(1.0)
    r2.evolve(1.0)
    with pytest.raises(ValueError, match="flux"):
        CoefficientField(r1, r2)


def test_burgers_strength_ratio_is_two():
    # |jump of psi| / |jump of a| = 2 exactly for the quadratic flux
    rng = random.Random(23)
    p1, p2 = random_scenario_pair(rng, max_jumps=4)
    field = _field(p1, p2)
    for t in (0.3, 0.9, 1.7):
        ratios = field.at(t).strength_ratio_range()
        assert ratios is not None
        assert ratios[0] == pytest.approx(2.0)
        assert ratios[1] == pytest.approx(2.0)


def test_weight_traces_lax_oracle():
    # single compressive jump: both weight traces sit at the offset m
    field = _field(Profile([0.0], [1.0, -1.0]), Profile.constant(0.0))
    weight = WeightField(field, 1.0)
    ws = weight.slice_at(0.5)
    assert ws.traces == ((1.0, 1.0),)
    assert ws.tv_b == 2.0
    assert ws.v_I_total == 2.0 and ws.v_II_total == 0.0


def test_weight_traces_slow_oracle():
    field = _field(Profile([0.0], [2.0, 0.0]), Profile.constant(3.0))
    ws = WeightField(field, 1.0).slice_at(0.5)
    assert ws.traces == ((3.0, 1.0),)


def test_weight_values_bracketed():
    rng = random.Random(31)
    p1, p2 = random_scenario_pair(rng, max_jumps=5)
    field = _field(p1, p2)
    weight = WeightField(field, 0.5)
    for t in (0.2, 1.1, 1.9):
        ws = weight.slice_at(t)
        for w in ws.piece_values:
            assert 0.5 - 1e-12 <= w <= 0.5 + ws.tv_b + 1e-12


def test_weight_requires_nonnegative_offset():
    field = _field(Profile([0.0], [1.0, -1.0]), Profile.constant(0.0))
    with pytest.raises(ValueError):
        WeightField(field, -0.5)


def test_exact_mode_fractions_everywhere():
    p1 = Profile([Fraction(0)], [Fraction(1), Fraction(-1)])
    p2 = Profile([Fraction(1, 2)], [Fraction(1, 2), Fraction(-1, 2)])
    field = _field(p1, p2, h=Fraction(1, 2), horizon=Fraction(2), exact=True)
    assert field.exact
    fs = field.at(Fraction(1, 4))
    for j in fs.jumps:
        assert isinstance(j.lam, Fraction)
        assert isinstance(j.a_minus, Fraction)
    ws = WeightField(field, Fraction(1)).slice_at(Fraction(1, 4))
    assert all(isinstance(w, Fraction) for w in ws.piece_values)


def test_build_helpers_return_profiles():
    r1 = FrontTrackingRun(FLUX, Profile([0.0], [1.0, -1.0]), 0.1)
    r2 = FrontTrackingRun(FLUX, Profile.constant(0.0), 0.1)
    r1.evolve(1.0)
    r2.evolve(1.0)
    a, jumps = build_coefficient(r1, r2, 0.5)
    assert isinstance(a, Profile)
    assert a.values == (0.5, -0.5)
    assert len(jumps) == 1
    w = build_weight(r1, r2, 1.0, 0.5)
    assert isinstance(w, Profile)


def test_export_jumps_csv_shape():
    field = _field(Profile([0.0], [1.0, -1.0]), Profile.constant(0.0))
    weight = WeightField(field, 1.0)
    buf = io.StringIO()
    export_jumps_csv(field, weight, [0.25, 0.75], buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == ("t,x,kind,partition,lambda,a_minus,a_plus,"
                        "b_jump,w_minus,w_plus")
    assert len(lines) == 3
