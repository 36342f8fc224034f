"""State-selective Raman transfer: resonances, selectivity, and model error."""

import numpy as np
import pytest

from atomlink import raman


def test_default_config_is_a_pi_pulse_on_resonance():
    cfg = raman.default_config()
    tuned = raman.tuned_to(cfg, raman.THREE_LEVEL)
    assert raman.transfer_probability(tuned, raman.THREE_LEVEL) == pytest.approx(1.0, abs=1e-12)


def test_resonances_are_symmetric_about_zero_detuning():
    cfg = raman.default_config()
    d3 = raman.delta_three_level(cfg)
    d4 = raman.delta_four_level(cfg)
    assert d3 == pytest.approx(2.150157472975317, rel=1e-9)
    assert d4 == pytest.approx(-d3, rel=1e-9)


def test_resonance_separation_grows_with_field():
    base = raman.default_config(bias_field_gauss=0.2445)
    double = raman.default_config(bias_field_gauss=0.4890)
    sep = raman.delta_three_level(base) - raman.delta_four_level(base)
    sep2 = raman.delta_three_level(double) - raman.delta_four_level(double)
    assert sep2 / sep == pytest.approx(2.0, rel=2e-3)


def test_zero_field_resonances_coincide():
    cfg = raman.default_config(bias_field_gauss=0.0)
    assert raman.delta_three_level(cfg) == pytest.approx(raman.delta_four_level(cfg), abs=1e-9)
    # degenerate resonances leave nothing to discriminate
    assert raman.selectivity_contrast(raman.tuned_to(cfg, raman.THREE_LEVEL)) < 0.04


def test_selectivity_contrast_at_bias_field():
    cfg = raman.tuned_to(raman.default_config(), raman.THREE_LEVEL)
    assert raman.transfer_probability(cfg, raman.FOUR_LEVEL) == pytest.approx(
        0.006472692280464532, rel=1e-9
    )
    assert raman.selectivity_contrast(cfg) == pytest.approx(0.9935273077195355, rel=1e-9)
    assert raman.selectivity_contrast(cfg) >= 0.978


def test_effective_model_tracks_full_level_dynamics():
    cfg = raman.default_config()
    for scheme in (raman.THREE_LEVEL, raman.FOUR_LEVEL):
        tuned = raman.tuned_to(cfg, scheme)
        eff = raman.transfer_probability(tuned, scheme)
        full = raman.full_level_transfer_probability(tuned, scheme)
        assert abs(eff - full) < 0.01
    # and off resonance too
    for delta in (-3.0, -1.0, 0.5, 2.8):
        probed = raman.RamanConfig(
            two_photon_detuning=delta, **{
                f.name: getattr(cfg, f.name)
                for f in cfg.__dataclass_fields__.values()
                if f.name != "two_photon_detuning"
            }
        )
        for scheme in (raman.THREE_LEVEL, raman.FOUR_LEVEL):
            eff = raman.transfer_probability(probed, scheme)
            full = raman.full_level_transfer_probability(probed, scheme)
            assert abs(eff - full) < 0.01


def test_transfer_spectrum_peaks_at_the_resonance():
    cfg = raman.default_config()
    spectrum = raman.transfer_spectrum(cfg, (-4.0, 4.0), 801, raman.THREE_LEVEL)
    assert spectrum.shape == (801, 2)
    assert spectrum[0, 0] == pytest.approx(-4.0)
    assert spectrum[-1, 0] == pytest.approx(4.0)
    peak = spectrum[np.argmax(spectrum[:, 1]), 0]
    step = spectrum[1, 0] - spectrum[0, 0]
    assert abs(peak - raman.delta_three_level(cfg)) <= step


def test_selectivity_spectrum_stacks_both_schemes():
    cfg = raman.default_config()
    grid = raman.selectivity_spectrum(cfg, (-4.0, 4.0), 201)
    assert grid.shape == (201, 3)
    three = raman.transfer_spectrum(cfg, (-4.0, 4.0), 201, raman.THREE_LEVEL)
    four = raman.transfer_spectrum(cfg, (-4.0, 4.0), 201, raman.FOUR_LEVEL)
    assert np.allclose(grid[:, 1], three[:, 1])
    assert np.allclose(grid[:, 2], four[:, 1])


def test_probabilities_stay_in_unit_interval():
    cfg = raman.default_config()
    grid = raman.selectivity_spectrum(cfg, (-6.0, 6.0), 501)
    assert grid[:, 1:].min() >= 0.0
    assert grid[:, 1:].max() <= 1.0 + 1e-12


def test_unknown_scheme_rejected():
    cfg = raman.default_config()
    with pytest.raises(ValueError):
        raman.transfer_probability(cfg, "two-level")
    with pytest.raises(ValueError):
        raman.tuned_to(cfg, "five-level")


def test_vanishing_elimination_denominator_raises():
    # mean detuning equal to the excited-state Zeeman shift zeroes a denominator
    shift = 2.0 * raman.G_F_EXCITED * raman.MU_B_ANGULAR * 0.2445
    with pytest.warns(UserWarning):
        cfg = raman.RamanConfig(mean_detuning=shift)
    with pytest.raises(raman.SingularDetuningError):
        raman.delta_three_level(cfg)


def test_small_mean_detuning_warns():
    with pytest.warns(UserWarning, match="adiabatic elimination"):
        raman.RamanConfig(mean_detuning=200.0)


def test_negative_pulse_duration_rejected():
    with pytest.raises(ValueError):
        raman.RamanConfig(pulse_us=-1.0)
