"""TOML scenario configuration: loading, validation, preset resolution.

One scenario document drives every command.  Sections mirror the core
dataclasses field by field (unknown keys are rejected); `build()` turns a
validated document into the core objects.  Named presets ship as package
data and can be shadowed by files in the directory named by the
ATOMLINK_CONFIG_DIR environment variable.
"""

from __future__ import annotations

import dataclasses
import os
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from pydantic import BaseModel, ConfigDict, ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .decoherence import INITIAL, MEMORY, CoherenceModel
from .link import LinkParams
from .raman import RamanConfig
from .rate import TimingBudget
from .seqsim import SequenceConfig

ENV_CONFIG_DIR = "ATOMLINK_CONFIG_DIR"
PRESET_NAMES = ("campaign-5km", "campaign-50km", "campaign-101km")
_PRESET_PACKAGE = "atomlink.presets"


class ConfigError(ValueError):
    """Invalid scenario document (parse error, unknown key, bad value)."""


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ScenarioMeta(_Section):
    name: str = "custom"
    description: str = ""
    stop_events: int | None = None
    max_hours: float | None = None
    shards: int = 1


class LinkSection(_Section):
    length_km: float
    attenuation_db_per_km: float | None = None
    photon_speed_km_per_s: float | None = None
    eta_collection: float | None = None
    eta_switch: float | None = None
    eta_conversion: float | None = None
    eta_filter: float | None = None
    eta_projection: float | None = None
    eta_connectors: float | None = None
    eta_detector: float | None = None
    window_ns: float | None = None
    window_fraction: float | None = None
    background_cps: float | None = None
    dark_cps: float | None = None
    n_detectors: float | None = None


class TimingSection(_Section):
    prep_us: float | None = None
    entangle_us: float | None = None
    raman_us: float | None = None
    cooling_us: float | None = None
    burst_length: int | None = None


class RamanSection(_Section):
    bias_field_gauss: float | None = None
    mean_detuning: float | None = None
    rabi_mk: float | None = None
    rabi_nk: float | None = None
    rabi_a3: float | None = None
    rabi_b3: float | None = None
    rabi_a4: float | None = None
    rabi_b4: float | None = None
    two_photon_detuning: float | None = None
    pulse_us: float | None = None


class CoherenceBasisSection(_Section):
    t2_us: float | None = None
    larmor_frequency_khz: float | None = None
    v0: float | None = None


class CoherenceSection(_Section):
    initial: CoherenceBasisSection = CoherenceBasisSection()
    memory: CoherenceBasisSection = CoherenceBasisSection()


class SequenceSection(_Section):
    pgc_ms: float | None = None
    ramp_down_ms: float | None = None
    field_stabilization_ms: float | None = None
    ramp_back_ms: float | None = None
    duty_cycle: float | None = None
    pump_efficiency: float | None = None
    excitation_efficiency: float | None = None
    excited_lifetime_ns: float | None = None
    raman_transfer_visibility: float | None = None
    entanglement_visibility: float | None = None
    readout_timing_visibility: float | None = None
    drift_visibility: float | None = None
    polarization_depolarization: float | None = None
    readout_flip_probability: float | None = None
    readout_duration_us: float | None = None
    measurement_plan: str | None = None
    bias_field_gauss: float | None = None
    rng_seed: int | None = None


class ScenarioConfig(_Section):
    """Validated scenario document; `build()` yields the core objects."""

    scenario: ScenarioMeta = ScenarioMeta()
    link: LinkSection
    timing: TimingSection = TimingSection()
    raman: RamanSection = RamanSection()
    coherence: CoherenceSection = CoherenceSection()
    sequence: SequenceSection = SequenceSection()

    def build(self) -> Scenario:
        link = _construct(LinkParams, self.link, "link")
        timing = _construct(TimingBudget, self.timing, "timing")
        raman = _construct(RamanConfig, self.raman, "raman")
        bias = self.sequence.bias_field_gauss
        if bias is None:
            bias = SequenceConfig.__dataclass_fields__["bias_field_gauss"].default
        coherences = {}
        for basis, section in ((INITIAL, self.coherence.initial),
                               (MEMORY, self.coherence.memory)):
            given = _given(section)
            try:
                model = CoherenceModel.for_field(
                    basis, bias,
                    t2_us=given.get("t2_us"),
                    v0=given.get("v0", 1.0),
                )
                if "larmor_frequency_khz" in given:
                    model = dataclasses.replace(
                        model, larmor_frequency_khz=given["larmor_frequency_khz"]
                    )
                coherences[basis] = model
            except ValueError as exc:
                raise ConfigError(f"coherence.{basis}: {exc}") from exc
        sequence_kwargs = _given(self.sequence)
        try:
            sequence = SequenceConfig(
                link=link,
                timing=timing,
                initial_coherence=coherences[INITIAL],
                memory_coherence=coherences[MEMORY],
                **sequence_kwargs,
            )
        except ValueError as exc:
            raise ConfigError(f"sequence: {exc}") from exc
        return Scenario(
            name=self.scenario.name,
            description=self.scenario.description,
            stop_events=self.scenario.stop_events,
            max_hours=self.scenario.max_hours,
            shards=self.scenario.shards,
            link=link,
            timing=timing,
            raman=raman,
            sequence=sequence,
        )


@dataclass(frozen=True)
class Scenario:
    """Core objects built from one validated configuration document."""

    name: str
    description: str
    stop_events: int | None
    max_hours: float | None
    shards: int
    link: LinkParams
    timing: TimingBudget
    raman: RamanConfig
    sequence: SequenceConfig


def _given(section: _Section) -> dict:
    return {k: v for k, v in section.__dict__.items() if v is not None}


def _construct(cls, section: _Section, name: str):
    try:
        return cls(**_given(section))
    except (ValueError, ArithmeticError) as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def parse_scenario(document: dict, source: str = "<inline>") -> ScenarioConfig:
    """Validate a parsed TOML document; raises ConfigError with key paths."""
    if not isinstance(document, dict):
        raise ConfigError(f"{source}: scenario document must be a table")
    try:
        return ScenarioConfig(**document)
    except ValidationError as exc:
        lines = [
            f"{'.'.join(str(loc) for loc in err['loc'])}: {err['msg']}"
            for err in exc.errors()
        ]
        raise ConfigError(f"{source}: " + "; ".join(lines)) from exc


def load_scenario_file(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        document = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_scenario(document, source=str(path))


def preset_names(environ: dict | None = None) -> list[str]:
    """Shipped preset names plus any *.toml in ATOMLINK_CONFIG_DIR."""
    names = set(PRESET_NAMES)
    env = os.environ if environ is None else environ
    config_dir = env.get(ENV_CONFIG_DIR)
    if config_dir:
        names.update(p.stem for p in Path(config_dir).glob("*.toml"))
    return sorted(names)


def resolve_config(name_or_path: str, environ: dict | None = None) -> ScenarioConfig:
    """Resolve a --config value: explicit file path, else preset lookup.

    Preset lookup order: ATOMLINK_CONFIG_DIR/<name>.toml, then the packaged
    presets.  A path that does not exist and is not a known preset is a
    configuration error.
    """
    env = os.environ if environ is None else environ
    path = Path(name_or_path)
    if path.suffix == ".toml" or path.exists():
        return load_scenario_file(path)
    config_dir = env.get(ENV_CONFIG_DIR)
    if config_dir:
        candidate = Path(config_dir) / f"{name_or_path}.toml"
        if candidate.exists():
            return load_scenario_file(candidate)
    try:
        packaged = resources.files(_PRESET_PACKAGE).joinpath(f"{name_or_path}.toml")
        raw = packaged.read_bytes()
    except (FileNotFoundError, ModuleNotFoundError) as exc:
        raise ConfigError(
            f"{name_or_path!r} is neither a config file nor a known preset "
            f"(presets: {', '.join(preset_names(env))})"
        ) from exc
    try:
        document = tomllib.loads(raw.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:  # pragma: no cover - shipped presets parse
        raise ConfigError(f"preset {name_or_path}: {exc}") from exc
    return parse_scenario(document, source=f"preset {name_or_path}")


def preset_document(name: str, environ: dict | None = None) -> dict:
    """Raw parsed TOML of a preset (for echo endpoints)."""
    env = os.environ if environ is None else environ
    config_dir = env.get(ENV_CONFIG_DIR)
    if config_dir:
        candidate = Path(config_dir) / f"{name}.toml"
        if candidate.exists():
            return tomllib.loads(candidate.read_text(encoding="utf-8"))
    try:
        raw = resources.files(_PRESET_PACKAGE).joinpath(f"{name}.toml").read_bytes()
    except (FileNotFoundError, ModuleNotFoundError) as exc:
        raise ConfigError(f"unknown preset {name!r}") from exc
    return tomllib.loads(raw.decode("utf-8"))
