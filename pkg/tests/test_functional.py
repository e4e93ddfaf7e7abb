"""Norm-ledger checks on hand-built pairs with known rates."""

from fractions import Fraction

import pytest

from wavetrack import (
    CoefficientField,
    FrontTrackingRun,
    Profile,
    burgers_flux,
    default_window,
    gain_cap_report,
    l1_identity_report,
    l1_norm,
    monotonicity_report,
    product_inequality_check,
    profile_difference,
    refinement_study,
    weighted_identity_report,
)

FLUX = burgers_flux()


def _field(p1, p2, h=0.1, horizon=2.0, exact=False):
    run_I = FrontTrackingRun(FLUX, p1, h, exact=exact).evolve(horizon)
    run_II = FrontTrackingRun(FLUX, p2, h, exact=exact).evolve(horizon)
    return CoefficientField(run_I, run_II)


def _lax_field():
    # standing shock against the zero state: every rate is known in closed
    # form, and the difference keeps unit size on both sides of the jump
    return _field(Profile([0.0], [1.0, -1.0]), Profile.constant(0.0))


def _slow_field():
    return _field(Profile([0.0], [2.0, 0.0]), Profile.constant(3.0))


def _fan_field(h):
    return _field(Profile([0.0], [-1.0, 1.0]), Profile.constant(0.53), h=h)


def test_default_window_covers_fronts():
    cf = _lax_field()
    lo, hi = default_window(cf, 2.0)
    assert (lo, hi) == (-9.0, 9.0)
    for run in (cf.run_I, cf.run_II):
        for front in run.fronts_at(1.9):
            assert lo < front.position_at(1.9) < hi


def test_lax_plain_ledger():
    rep = l1_identity_report(_lax_field(), 0.0, 2.0)
    assert rep.passed
    assert rep.norm_start == pytest.approx(18.0)
    assert rep.norm_end == pytest.approx(18.0)
    assert rep.decay_lax == pytest.approx(2.0)
    assert rep.flux_total == pytest.approx(2.0)
    assert abs(rep.residual_global) <= rep.tol_norm
    assert len(rep.intervals) == 1
    rec = rep.intervals[0]
    assert rec.interior_rate == pytest.approx(-1.0)
    assert rec.flux_rate == pytest.approx(1.0)
    assert rec.lax_rate == pytest.approx(1.0)
    assert rec.slope_measured == pytest.approx(0.0, abs=1e-10)
    assert rec.slope_analytic == pytest.approx(rec.slope_measured, abs=1e-10)
    assert rec.kind_counts == {
        "lax": 1, "slow": 0, "fast": 0, "rarefaction_shock": 0,
    }


def test_lax_weighted_ledger():
    # with m = 1 the weight is identically one here (the variation budget
    # splits evenly around the shock), so the weighted ledger must agree
    rep = weighted_identity_report(_lax_field(), 1.0, 0.0, 2.0)
    assert rep.passed
    assert rep.norm_start == pytest.approx(18.0)
    assert rep.decay_lax == pytest.approx(2.0)
    rec = rep.intervals[0]
    assert rec.interior_rate == pytest.approx(-1.0)
    assert rec.lax_rate == pytest.approx(1.0)
    assert rec.flux_rate == pytest.approx(1.0)


def test_norm_sequence_is_time_ordered():
    seq = l1_identity_report(_lax_field(), 0.0, 2.0).norm_sequence()
    times = [t for t, _ in seq]
    assert times == sorted(times)
    assert times[0] == 0.0 and times[-1] == 2.0


def test_slow_jump_rates():
    """An undercompressive jump moves norm through the window edges only."""
    cf = _slow_field()
    weighted = weighted_identity_report(cf, 1.0, 0.0, 2.0)
    assert weighted.passed
    rec = weighted.intervals[0]
    assert rec.interior_rate == pytest.approx(-3.0)
    assert rec.slow_fast_rate == pytest.approx(3.0)
    assert rec.flux_rate == pytest.approx(3.0)
    assert rec.slope_measured == pytest.approx(0.0, abs=1e-10)

    plain = l1_identity_report(cf, 0.0, 2.0)
    assert plain.passed
    rec = plain.intervals[0]
    assert rec.interior_rate == pytest.approx(0.0, abs=1e-12)
    assert rec.flux_rate == pytest.approx(-2.0)
    assert rec.slope_measured == pytest.approx(-2.0)


def test_merge_event_keeps_plain_norm_continuous():
    cf = _field(Profile([0.0, 1.0], [1.0, 0.0, -1.0]), Profile.constant(0.0))
    rep = l1_identity_report(cf, 0.0, 2.0)
    assert rep.passed
    assert len(rep.intervals) == 2
    assert len(rep.event_drops) == 1
    when, drop = rep.event_drops[0]
    assert when == pytest.approx(1.0)
    assert drop == pytest.approx(0.0, abs=1e-9)


def test_fan_cancellation_drops_weighted_norm():
    # a shock eats the first fan member at t = 1.5; the variation budget
    # shrinks there, so the weighted norm may only jump downward
    cf = _field(Profile([0.0, 0.5], [0.5, -0.5, 0.5]), Profile.constant(0.0),
                h=0.4)
    weighted = weighted_identity_report(cf, 1.0, 0.0, 2.0)
    assert weighted.passed
    assert len(weighted.event_drops) == 1
    when, drop = weighted.event_drops[0]
    assert when == pytest.approx(1.5)
    assert drop < -1e-6
    assert weighted.drop_total == pytest.approx(drop)

    plain = l1_identity_report(cf, 0.0, 2.0)
    assert plain.passed
    assert plain.event_drops[0][1] == pytest.approx(0.0, abs=1e-9)
    # before the collision all four jump kinds coexist in this field
    assert plain.intervals[0].kind_counts == {
        "lax": 1, "slow": 1, "fast": 1, "rarefaction_shock": 1,
    }


def test_exact_mode_closes_ledger_exactly():
    cf = _field(
        Profile([Fraction(0), Fraction(1)], [Fraction(1), Fraction(0), Fraction(-1)]),
        Profile.constant(Fraction(0)),
        h=Fraction(1, 10), horizon=Fraction(2), exact=True,
    )
    rep = l1_identity_report(cf, Fraction(0), Fraction(2))
    assert rep.passed
    assert rep.tol_norm == 0
    assert rep.residual_global == 0
    assert isinstance(rep.residual_global, Fraction)
    assert rep.norm_start == Fraction(18)

    weighted = weighted_identity_report(cf, Fraction(1), Fraction(0), Fraction(2))
    assert weighted.passed
    assert weighted.residual_global == 0
    assert weighted.event_drops == [(Fraction(1), Fraction(0))]


def test_norm_matches_l1_for_compact_difference():
    p1 = Profile([0.0, 1.0], [1.0, 0.0, 1.0])
    p2 = Profile.constant(1.0)
    cf = _field(p1, p2)
    rep = l1_identity_report(cf, 0.0, 2.0)
    assert rep.norm_start == pytest.approx(l1_norm(profile_difference(p2, p1)))
    assert rep.norm_start == pytest.approx(1.0)


def test_custom_window():
    rep = l1_identity_report(_lax_field(), 0.0, 2.0, window=(-3.0, 3.0))
    assert rep.passed
    assert rep.norm_start == pytest.approx(6.0)
    assert rep.decay_lax == pytest.approx(2.0)


def test_gain_cap_fan_ladder():
    """The rarefaction-side budget shrinks linearly with the fan increment."""
    for h in (0.2, 0.1, 0.05):
        cap = gain_cap_report(_fan_field(h), 0.0, 2.0)
        assert cap.passed
        assert cap.chain_link_ok and cap.cap_ok
        assert cap.sup_rs_da == pytest.approx(h / 2, rel=1e-9)
        assert cap.rs_chain == pytest.approx(4 * h, rel=1e-9)
        assert cap.rs_cap == pytest.approx(8 * h, rel=1e-12)
        assert cap.gain_rs <= cap.rs_chain <= cap.rs_cap
        assert cap.bound_slack > 0


def test_gain_cap_sees_actual_gain_shrink():
    gains = [gain_cap_report(_fan_field(h), 0.0, 2.0).gain_rs
             for h in (0.2, 0.1, 0.05)]
    assert gains[0] > gains[1] > gains[2] > 0


def test_monotonicity_without_rarefaction_jumps():
    rep = monotonicity_report(_lax_field(), 1.0, 0.0, 2.0)
    assert rep.passed
    assert rep.rs_gain_plain == pytest.approx(0.0, abs=1e-12)
    assert rep.rs_gain_weighted == pytest.approx(0.0, abs=1e-12)
    assert rep.plain_nonincreasing
    assert rep.weighted_nonincreasing


def test_product_rule_lax_rate():
    # interior -1, uniform lax factor (2m + TV(a)) = 3 on decay 0.5, and a
    # signed product atom -1 leave half a unit of negative slack per time
    rep = product_inequality_check(_lax_field(), 1.0, 0.0, 2.0)
    assert rep.passed
    assert not rep.rs_present
    assert len(rep.interval_rates) == 1
    t0, t1, rate = rep.interval_rates[0]
    assert (t0, t1) == (0.0, 2.0)
    assert rate == pytest.approx(-0.5)
    assert rep.max_interval_rate == pytest.approx(-0.5)
    assert rep.lax_total == pytest.approx(3.0)
    assert rep.product_total == pytest.approx(-2.0)
    assert rep.global_slack == pytest.approx(-1.0)


def test_product_rule_undercompressive_is_tight():
    rep = product_inequality_check(_slow_field(), 1.0, 0.0, 2.0)
    assert rep.passed
    _, _, rate = rep.interval_rates[0]
    assert rate == pytest.approx(0.0, abs=1e-12)
    assert rep.product_total == pytest.approx(6.0)


def test_product_rule_strict_flag():
    cf = _fan_field(0.2)
    default = product_inequality_check(cf, 1.0, 0.0, 2.0)
    assert default.rs_present
    assert default.passed
    strict = product_inequality_check(cf, 1.0, 0.0, 2.0, strict=True)
    assert not strict.passed
    assert any("positive" in v for v in strict.violations)


def test_refinement_study_rows():
    def make_pair(h):
        run_I = FrontTrackingRun(FLUX, Profile([0.0], [-1.0, 1.0]), h).evolve(2.0)
        run_II = FrontTrackingRun(FLUX, Profile.constant(0.53), h).evolve(2.0)
        return run_I, run_II

    rows = refinement_study(make_pair, [0.2, 0.1], 1.0, 0.0, 2.0)
    assert [row["h"] for row in rows] == [0.2, 0.1]
    for row in rows:
        assert row["passed"]
        assert row["norm_start"] == pytest.approx(row["plain"].norm_start)
    assert rows[1]["rs_chain"] == pytest.approx(rows[0]["rs_chain"] / 2, rel=1e-9)
    assert rows[1]["sup_rs_da"] == pytest.approx(rows[0]["sup_rs_da"] / 2, rel=1e-9)


def test_report_serializes():
    d = l1_identity_report(_lax_field(), 0.0, 2.0).to_dict()
    assert d["kind"] == "plain"
    assert d["passed"] is True
    assert len(d["intervals"]) == 1
    assert set(d["intervals"][0]) >= {"interior_rate", "flux_rate", "kind_counts"}
