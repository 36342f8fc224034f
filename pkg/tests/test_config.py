"""Scenario files: parsing, validation, presets, and directory resolution."""

import dataclasses
import textwrap

import pytest

from atomlink import config
from atomlink.config import ConfigError


def test_packaged_presets_build():
    for name in config.PRESET_NAMES:
        scenario = config.resolve_config(name).build()
        assert scenario.name == name
    p101 = config.resolve_config("campaign-101km").build()
    assert p101.link.length_km == 101.0
    assert p101.stop_events == 656
    assert p101.shards == 4
    assert p101.sequence.rng_seed == 19
    assert p101.sequence.measurement_plan == "three-basis"
    p50 = config.resolve_config("campaign-50km").build()
    assert p50.link.length_km == 50.0
    assert p50.stop_events == 6548
    assert p50.shards == 8
    assert p50.sequence.rng_seed == 11
    assert p50.sequence.measurement_plan == "fringe"
    p5 = config.resolve_config("campaign-5km").build()
    assert p5.link.length_km == 5.0
    assert p5.sequence.polarization_depolarization == 0.0


def test_preset_sequence_carries_link_and_timing():
    scenario = config.resolve_config("campaign-101km").build()
    assert scenario.sequence.link == scenario.link
    assert scenario.sequence.timing == scenario.timing
    assert scenario.timing.cooling_us == 6500.0
    assert scenario.sequence.memory_coherence.t2_us == 6910.0
    assert scenario.sequence.initial_coherence.t2_us == 322.5


def test_minimal_document_uses_model_defaults():
    scenario = config.parse_scenario({"link": {"length_km": 25.0}}, "inline").build()
    assert scenario.link.length_km == 25.0
    assert scenario.link.eta_collection == 0.011
    assert scenario.timing.burst_length == 11
    assert scenario.sequence.duty_cycle == 0.5
    assert scenario.stop_events is None
    assert scenario.name == "custom"


def test_unknown_keys_are_rejected_with_their_path():
    with pytest.raises(ConfigError, match="link.lenght_km"):
        config.parse_scenario({"link": {"lenght_km": 25.0}}, "inline")
    with pytest.raises(ConfigError, match="scenario.sharding"):
        config.parse_scenario(
            {"scenario": {"sharding": 2}, "link": {"length_km": 1.0}}, "inline"
        )


def test_missing_length_is_rejected():
    with pytest.raises(ConfigError, match="length_km"):
        config.parse_scenario({"link": {}}, "inline")
    with pytest.raises(ConfigError, match="link"):
        config.parse_scenario({}, "inline")


def test_domain_errors_carry_the_section_name():
    doc = {"link": {"length_km": -3.0}}
    with pytest.raises(ConfigError, match="link"):
        config.parse_scenario(doc, "inline").build()
    doc = {"link": {"length_km": 3.0}, "sequence": {"duty_cycle": 0.0}}
    with pytest.raises(ConfigError, match="sequence"):
        config.parse_scenario(doc, "inline").build()


def test_coherence_overrides():
    doc = {
        "link": {"length_km": 10.0},
        "coherence": {
            "memory": {"t2_us": 5000.0, "v0": 0.9},
            "initial": {"larmor_frequency_khz": 340.0},
        },
    }
    scenario = config.parse_scenario(doc, "inline").build()
    assert scenario.sequence.memory_coherence.t2_us == 5000.0
    assert scenario.sequence.memory_coherence.v0 == 0.9
    assert scenario.sequence.initial_coherence.larmor_frequency_khz == 340.0
    # unset values still come from the field-derived model
    assert scenario.sequence.initial_coherence.t2_us == 322.5
    assert scenario.sequence.memory_coherence.larmor_frequency_khz == pytest.approx(
        0.6295175819295351, rel=1e-9
    )


def test_load_scenario_file(tmp_path):
    path = tmp_path / "bench.toml"
    path.write_text(textwrap.dedent("""\
        [scenario]
        name = "bench"
        stop_events = 12

        [link]
        length_km = 33.0
        dark_cps = 2.0

        [sequence]
        rng_seed = 5
    """))
    scenario = config.load_scenario_file(path).build()
    assert scenario.name == "bench"
    assert scenario.stop_events == 12
    assert scenario.link.dark_cps == 2.0
    assert scenario.sequence.rng_seed == 5


def test_malformed_toml_is_a_config_error(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[link\nlength_km = 1")
    with pytest.raises(ConfigError):
        config.load_scenario_file(path)


def test_resolve_config_precedence(tmp_path, monkeypatch):
    custom = tmp_path / "bench.toml"
    custom.write_text("[link]\nlength_km = 7.0\n")
    environ = {config.ENV_CONFIG_DIR: str(tmp_path)}
    assert config.resolve_config("bench", environ).build().link.length_km == 7.0
    # a directory preset shadows the packaged one of the same name
    shadow = tmp_path / "campaign-5km.toml"
    shadow.write_text("[link]\nlength_km = 6.0\n")
    assert config.resolve_config("campaign-5km", environ).build().link.length_km == 6.0
    # explicit paths win over everything
    assert config.resolve_config(str(custom), environ).build().link.length_km == 7.0
    names = config.preset_names(environ)
    assert "bench" in names
    assert set(config.PRESET_NAMES) <= set(names)


def test_resolve_config_unknown_name_lists_presets():
    with pytest.raises(ConfigError, match="campaign-101km"):
        config.resolve_config("campaign-202km", {})
    with pytest.raises(ConfigError):
        config.resolve_config("missing-file.toml", {})


def test_preset_document_returns_the_raw_table():
    doc = config.preset_document("campaign-101km", {})
    assert doc["link"]["length_km"] == 101.0
    assert doc["scenario"]["stop_events"] == 656
    assert doc["sequence"]["rng_seed"] == 19


def test_scenario_is_immutable():
    scenario = config.resolve_config("campaign-101km").build()
    with pytest.raises(dataclasses.FrozenInstanceError):
        scenario.stop_events = 3
