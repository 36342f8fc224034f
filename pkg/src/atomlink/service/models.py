"""Request and response shapes of the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ScenarioSource(_Model):
    """Exactly one of: a preset name, or an inline scenario document."""

    preset: str | None = None
    document: dict | None = None

    @model_validator(mode="after")
    def _exactly_one(self) -> "ScenarioSource":
        if (self.preset is None) == (self.document is None):
            raise ValueError("provide exactly one of 'preset' or 'document'")
        return self


class RateRequest(_Model):
    scenario: ScenarioSource
    lengths_km: list[float] | None = None
    duty_cycle: float | None = None


class SnrRequest(_Model):
    scenario: ScenarioSource
    lengths_km: list[float] | None = None
    dark_cps: float | None = None


class RamanRequest(_Model):
    scenario: ScenarioSource
    delta_min_mhz: float = -1.0
    delta_max_mhz: float = 1.0
    n_points: int = 401
    bias_field_gauss: float | None = None


class SimulateRequest(_Model):
    scenario: ScenarioSource
    stop_events: int | None = Field(None, ge=0)
    max_hours: float | None = Field(None, gt=0.0)
    seed: int | None = None
    shards: int | None = Field(None, ge=1)
    include_records: bool = True


class CoherenceRequest(_Model):
    scenario: ScenarioSource
    basis: str = "memory"
    delays_us: list[float] | None = None
    noise_sigma: float = 0.02
    seed: int | None = None


class AnalyzeRequest(_Model):
    summary: dict


class HealthResponse(_Model):
    status: str
    version: str


class PresetsResponse(_Model):
    presets: list[str]


class RateRow(_Model):
    L_km: float
    T_us: float
    R_hz: float
    eta: float
    r_per_s: float


class RateResponse(_Model):
    config_echo: dict
    rows: list[RateRow]


class SnrRow(_Model):
    L_km: float
    p_signal: float
    p_qfc: float
    p_dc: float
    snr: float


class SnrResponse(_Model):
    config_echo: dict
    rows: list[SnrRow]


class RamanRow(_Model):
    delta_mhz: float
    p_target: float
    p_blocked: float


class RamanResponse(_Model):
    config_echo: dict
    resonance_three_mhz: float
    resonance_four_mhz: float
    contrast_on_resonance: float
    rows: list[RamanRow]


class CoherenceRow(_Model):
    delay_us: float
    visibility: float


class CoherenceResponse(_Model):
    config_echo: dict
    basis: str
    t2_model_us: float
    rows: list[CoherenceRow]
    fit: dict | None = None
    fit_error: str | None = None


class SimulateResponse(_Model):
    summary: dict
    report: dict


class AnalyzeResponse(_Model):
    report: dict
