"""Event-by-event campaign simulation: determinism, timeline, statistics."""

import dataclasses
import json
import math

import numpy as np
import pytest

from atomlink import analysis, link, rate, seqsim
from atomlink.link import LinkParams
from atomlink.seqsim import SequenceConfig, _Timeline


def _config(length_km=101.0, **overrides):
    return SequenceConfig(LinkParams(length_km), **overrides)


# --- measurement plans ----------------------------------------------------------

def test_three_basis_plan_layout():
    settings, meta = seqsim.measurement_plan(_config())
    assert [m["label"] for m in meta] == ["Z", "X", "Y"]
    assert all(m["kind"] == "correlator" for m in meta)
    assert settings[0].photon_angle_rad is None


def test_fringe_plan_layout():
    settings, meta = seqsim.measurement_plan(_config(measurement_plan="fringe"))
    assert len(settings) == 32
    labels = [m["label"] for m in meta]
    assert labels[0] == "HV@0" and labels[16] == "DA@0"
    assert {m["photon_basis"] for m in meta} == {0, 1}
    angles = [m["angle_deg"] for m in meta[:16]]
    assert angles == [i * 22.5 for i in range(16)]


def test_unknown_plan_rejected():
    with pytest.raises(ValueError):
        _config(measurement_plan="tomography")


# --- determinism -----------------------------------------------------------------

def test_same_seed_reproduces_the_full_summary():
    cfg = _config()
    a = seqsim.run_campaign(cfg, stop_events=40, shards=3, seed=21)
    b = seqsim.run_campaign(cfg, stop_events=40, shards=3, seed=21)
    assert np.array_equal(a.setting_counts, b.setting_counts)
    assert a.records == b.records
    assert a.total_attempts == b.total_attempts
    assert a.wall_hours == b.wall_hours
    c = seqsim.run_campaign(cfg, stop_events=40, shards=3, seed=22)
    assert not np.array_equal(a.setting_counts, c.setting_counts) or a.records != c.records


def test_seed_defaults_to_the_configured_stream():
    cfg = _config(rng_seed=77)
    a = seqsim.run_campaign(cfg, stop_events=10)
    b = seqsim.run_campaign(cfg, stop_events=10, seed=77)
    assert a.records == b.records
    assert a.seed == 77


def test_generator_is_recorded_for_reproducibility():
    summary = seqsim.run_campaign(_config(), stop_events=1, seed=1)
    assert "PCG64" in summary.generator


# --- bookkeeping -------------------------------------------------------------------

def test_summary_bookkeeping_is_consistent():
    summary = seqsim.run_campaign(_config(), stop_events=120, shards=4, seed=9)
    summary.check()
    assert summary.n_events == 120
    assert sum(summary.truth_counts.values()) == 120
    assert summary.setting_counts.shape == (3, 2, 2)
    assert summary.total_attempts > 120
    assert 0.0 < summary.noise_fraction < 1.0
    # records sorted bookkeeping: every record indexes a valid setting
    assert all(0 <= r.setting_index < 3 for r in summary.records)
    assert all(r.truth in ("signal", "qfc", "dark") for r in summary.records)


def test_stop_events_zero_yields_an_empty_summary():
    summary = seqsim.run_campaign(_config(), stop_events=0, seed=1)
    assert summary.n_events == 0
    assert summary.total_attempts == 0
    assert summary.wall_hours == 0.0
    assert summary.noise_fraction == 0.0


def test_campaign_needs_a_stop_condition():
    with pytest.raises(ValueError):
        seqsim.run_campaign(_config())
    with pytest.raises(ValueError):
        seqsim.run_campaign(_config(), stop_events=5, shards=0)
    with pytest.raises(ValueError):
        seqsim.run_campaign(_config(), stop_events=-1)


def test_hour_budget_caps_the_wall_clock():
    summary = seqsim.run_campaign(_config(), max_hours=0.05, seed=3)
    assert summary.wall_hours <= 0.05 + 1e-9
    assert summary.n_events >= 0


def test_round_robin_spreads_events_over_settings():
    summary = seqsim.run_campaign(_config(), stop_events=300, shards=2, seed=5)
    per_setting = summary.setting_counts.sum(axis=(1, 2))
    assert per_setting.sum() == 300
    assert per_setting.min() >= 90  # near-even split across the three settings


# --- timeline ------------------------------------------------------------------------

def test_wall_clock_is_active_time_over_duty_cycle():
    cfg = _config(duty_cycle=0.5)
    summary = seqsim.run_campaign(cfg, stop_events=50, seed=2)
    assert summary.wall_hours == pytest.approx(
        summary.active_us / 3600e6 / cfg.duty_cycle, rel=1e-12
    )


def test_timeline_burst_arithmetic():
    cfg = _config()
    tl = _Timeline(cfg)
    body = 3.0 + 0.2 + 8.0 + link.travel_time_us(cfg.link)
    assert tl.body_us == pytest.approx(body, rel=1e-12)
    # whole bursts: cooling + attempts + ramp back
    tl.advance(22)
    cycle = 6500.0 + 11.0 * body + 500.0
    assert tl.clock_us == pytest.approx(2.0 * cycle, rel=1e-12)
    assert tl.pos == 0
    # partial burst: cooling then attempts, no ramp yet
    tl.advance(4)
    assert tl.clock_us == pytest.approx(2.0 * cycle + 6500.0 + 4.0 * body, rel=1e-12)
    assert tl.pos == 4


def test_timeline_click_interrupts_the_burst():
    cfg = _config()
    tl = _Timeline(cfg)
    tl.advance(3)
    start = tl.clock_us
    detect, readout = tl.click(jitter_us=0.0)
    offset = 3.0 + 0.2 + link.travel_time_us(cfg.link)
    assert detect == pytest.approx(start + offset, rel=1e-12)
    assert readout == pytest.approx(start + offset + 8.0 + 100.0, rel=1e-12)
    assert tl.pos == 0  # a click always ends the burst


def test_timeline_attempts_within_matches_advance():
    cfg = _config()
    rng = np.random.default_rng(8)
    for _ in range(200):
        tl = _Timeline(cfg)
        tl.advance(int(rng.integers(0, 40)))
        budget = float(rng.uniform(0.0, 1e5))
        n = tl.attempts_within(budget)
        probe = _Timeline(cfg)
        probe.restore(tl.snapshot())
        start = probe.clock_us
        probe.advance(n)
        assert probe.clock_us - start <= budget + 1e-6
        if n > 0:
            again = _Timeline(cfg)
            again.restore(tl.snapshot())
            again.advance(n + 1)
            assert again.clock_us - start > budget - 1e-6


def test_active_time_accounts_bursts_and_readouts():
    cfg = _config()
    summary = seqsim.run_campaign(cfg, stop_events=100, seed=6)
    # lower bound: every attempt costs at least the burst-amortized body time
    body = 3.0 + 0.2 + 8.0 + link.travel_time_us(cfg.link)
    assert summary.active_us > summary.total_attempts * body
    # upper bound: full burst cycle per attempt plus per-event readout blocks
    per_attempt = (6500.0 + 11.0 * body + 500.0) / 11.0
    slack = summary.n_events * (6500.0 + 100.0 + 500.0 + body)
    assert summary.active_us < summary.total_attempts * per_attempt + slack


# --- statistics ------------------------------------------------------------------------

def test_attempt_gaps_follow_the_click_probability():
    cfg = _config(length_km=50.0)
    summary = seqsim.run_campaign(cfg, stop_events=4000, shards=4, seed=13)
    p_total = link.click_breakdown(cfg.link).p_total
    mean_gap = summary.total_attempts / summary.n_events
    # geometric mean 1/p, relative sigma 1/sqrt(n)
    assert mean_gap == pytest.approx(1.0 / p_total, rel=5.0 / math.sqrt(4000))


def test_truth_mixture_matches_the_breakdown():
    cfg = _config(length_km=101.0)
    summary = seqsim.run_campaign(cfg, stop_events=20000, shards=8, seed=17)
    b = link.click_breakdown(cfg.link)
    w = (b.p_qfc_noise + b.p_darkcount) / b.p_total
    sigma = math.sqrt(w * (1.0 - w) / 20000)
    assert summary.noise_fraction == pytest.approx(w, abs=5 * sigma)


def test_correlators_converge_to_the_analytic_expectation():
    cfg = _config(length_km=101.0)
    summary = seqsim.run_campaign(cfg, stop_events=30000, shards=8, seed=23)
    expected = seqsim.expected_correlators(cfg)
    for label, (e, sigma) in analysis.three_basis_correlators(summary).items():
        assert e == pytest.approx(expected[label], abs=5 * sigma)


def test_expected_correlators_fold_in_noise_and_readout():
    cfg = _config()
    expected = seqsim.expected_correlators(cfg)
    assert set(expected) == {"Z", "X", "Y"}
    assert expected["X"] == pytest.approx(expected["Y"], rel=1e-9)
    assert 0.0 < expected["X"] < expected["Z"] < 1.0


def test_sample_click_counts_matches_the_breakdown():
    cfg = _config(length_km=50.0)
    rng = np.random.default_rng(3)
    n = 400000
    counts = seqsim.sample_click_counts(rng, cfg.link, n)
    b = link.click_breakdown(cfg.link)
    for key, p in (("signal", b.p_signal), ("qfc", b.p_qfc_noise), ("dark", b.p_darkcount)):
        sigma = math.sqrt(n * p * (1.0 - p))
        assert abs(counts[key] - n * p) < 5 * sigma + 1.0


def test_run_attempt_returns_none_or_a_record():
    cfg = _config(length_km=5.0)
    rng = np.random.default_rng(2)
    n = 20000  # ~17 expected clicks at this length
    outcomes = [seqsim.run_attempt(rng, cfg) for _ in range(n)]
    records = [r for r in outcomes if r is not None]
    assert 0 < len(records) < n
    assert all(r.photon_outcome in (-1, 1) and r.atom_outcome in (-1, 1) for r in records)


# --- export round trips -------------------------------------------------------------

def test_summary_documents_round_trip_through_json():
    cfg = _config()
    summary = seqsim.run_campaign(cfg, stop_events=25, shards=2, seed=31)
    doc = json.loads(json.dumps(seqsim.summary_to_dict(summary)))
    rebuilt = seqsim.summary_from_dict(doc)
    assert np.array_equal(rebuilt.setting_counts, summary.setting_counts)
    assert rebuilt.records == summary.records
    assert rebuilt.truth_counts == summary.truth_counts
    assert rebuilt.wall_hours == summary.wall_hours
    slim = seqsim.summary_from_dict(json.loads(json.dumps(
        seqsim.summary_to_dict(summary, include_records=False)
    )))
    assert slim.records == []
    assert np.array_equal(slim.setting_counts, summary.setting_counts)


def test_config_round_trips_through_its_echo():
    cfg = _config(drift_visibility=0.93, measurement_plan="fringe", rng_seed=4)
    summary = seqsim.run_campaign(cfg, stop_events=1, seed=4)
    echo = json.loads(json.dumps(summary.config_echo))
    assert seqsim.config_from_echo(echo) == cfg


def test_summary_from_dict_rejects_foreign_documents():
    with pytest.raises(ValueError):
        seqsim.summary_from_dict({"riff": "raff"})
    with pytest.raises(ValueError):
        seqsim.config_from_echo({"just": "noise"})


# --- leave-one-out budget -------------------------------------------------------------

def test_leave_one_out_budget_explains_the_visibility_loss():
    cfg = _config()
    budget = seqsim.leave_one_out_budget(cfg)
    terms = budget.terms()
    assert set(terms) == {
        "snr_readout", "decoherence", "raman_transfers", "readout",
        "entanglement_generation", "readout_timing", "drifts",
    }
    assert all(0.0 <= v < 1.0 for v in terms.values())
    # no drift configured here, so nothing is attributed to that channel
    assert terms["drifts"] == pytest.approx(0.0, abs=1e-9)
    composed = analysis.compose_error_budget(budget, "multiplicative")
    model = analysis.fidelity_lower_bound(
        sum(seqsim.expected_correlators(cfg).values()) / 3.0
    )
    assert composed == pytest.approx(model, abs=0.01)
    # drift only damps the equatorial correlators, so its attribution is the
    # basis-averaged visibility ratio with and without the channel
    v = 0.901731
    drifting = seqsim.leave_one_out_budget(_config(drift_visibility=v))
    with_drift = seqsim.expected_correlators(_config(drift_visibility=v))
    without = seqsim.expected_correlators(_config(drift_visibility=1.0))
    ratio = sum(with_drift.values()) / sum(without.values())
    assert drifting.terms()["drifts"] == pytest.approx(1.0 - ratio, abs=1e-9)
    assert 0.0 < drifting.terms()["drifts"] < 1.0 - v


def test_cooling_components_must_match_the_timing_budget():
    with pytest.raises(ValueError, match="cooling"):
        _config(pgc_ms=2.0)
