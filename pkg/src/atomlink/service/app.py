"""FastAPI application wrapping the core package.

Every computing endpoint takes a scenario source (preset name or inline
document), echoes the fully built configuration, and returns rows shaped for
direct CSV export.  Config problems map to 422, invalid runtime arguments to
400.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__, analysis, seqsim
from .. import link as link_mod
from .. import raman as raman_mod
from .. import rate as rate_mod
from ..config import (
    ConfigError,
    Scenario,
    parse_scenario,
    preset_document,
    preset_names,
    resolve_config,
)
from ..decoherence import INITIAL, MEMORY, synthetic_visibility_data
from .models import (
    AnalyzeRequest,
    AnalyzeResponse,
    CoherenceRequest,
    CoherenceResponse,
    CoherenceRow,
    HealthResponse,
    PresetsResponse,
    RamanRequest,
    RamanResponse,
    RamanRow,
    RateRequest,
    RateResponse,
    RateRow,
    ScenarioSource,
    SimulateRequest,
    SimulateResponse,
    SnrRequest,
    SnrResponse,
    SnrRow,
)

app = FastAPI(title="atomlink", version=__version__)

TWO_PI = 2.0 * np.pi


def _scenario(source: ScenarioSource) -> Scenario:
    try:
        if source.preset is not None:
            validated = resolve_config(source.preset)
        else:
            validated = parse_scenario(source.document)
        return validated.build()
    except ConfigError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def _echo(scenario: Scenario) -> dict:
    return {
        "name": scenario.name,
        "description": scenario.description,
        "stop_events": scenario.stop_events,
        "max_hours": scenario.max_hours,
        "shards": scenario.shards,
        "link": dataclasses.asdict(scenario.link),
        "timing": dataclasses.asdict(scenario.timing),
        "raman": dataclasses.asdict(scenario.raman),
        "sequence": dataclasses.asdict(scenario.sequence),
    }


def _bad_request(exc: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(exc))


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.get("/presets", response_model=PresetsResponse)
def presets() -> PresetsResponse:
    return PresetsResponse(presets=preset_names())


@app.get("/presets/{name}")
def preset(name: str) -> dict:
    try:
        return preset_document(name)
    except ConfigError as exc:
        raise HTTPException(status_code=404, detail=str(exc)) from exc


@app.post("/rate", response_model=RateResponse)
def rate(request: RateRequest) -> RateResponse:
    scenario = _scenario(request.scenario)
    lengths = request.lengths_km
    if lengths is None:
        lengths = [scenario.link.length_km]
    duty = request.duty_cycle
    if duty is None:
        duty = scenario.sequence.duty_cycle
    rows = []
    try:
        for length in lengths:
            params = dataclasses.replace(scenario.link, length_km=length)
            result = rate_mod.entanglement_rate(scenario.timing, params, duty)
            rows.append(
                RateRow(
                    L_km=length,
                    T_us=result.attempt_period_us,
                    R_hz=result.repetition_rate_hz,
                    eta=result.click_probability,
                    r_per_s=result.entanglement_rate_hz,
                )
            )
    except (ValueError, ArithmeticError) as exc:
        raise _bad_request(exc) from exc
    return RateResponse(config_echo=_echo(scenario), rows=rows)


@app.post("/snr", response_model=SnrResponse)
def snr(request: SnrRequest) -> SnrResponse:
    scenario = _scenario(request.scenario)
    lengths = request.lengths_km
    if lengths is None:
        lengths = [scenario.link.length_km]
    base = scenario.link
    rows = []
    try:
        if request.dark_cps is not None:
            base = dataclasses.replace(base, dark_cps=request.dark_cps)
        for length in lengths:
            params = dataclasses.replace(base, length_km=length)
            breakdown = link_mod.click_breakdown(params)
            rows.append(
                SnrRow(
                    L_km=length,
                    p_signal=breakdown.p_signal,
                    p_qfc=breakdown.p_qfc_noise,
                    p_dc=breakdown.p_darkcount,
                    snr=link_mod.snr(params),
                )
            )
    except (ValueError, ArithmeticError) as exc:
        raise _bad_request(exc) from exc
    return SnrResponse(config_echo=_echo(scenario), rows=rows)


@app.post("/raman", response_model=RamanResponse)
def raman(request: RamanRequest) -> RamanResponse:
    scenario = _scenario(request.scenario)
    cfg = scenario.raman
    try:
        if request.bias_field_gauss is not None:
            cfg = dataclasses.replace(cfg, bias_field_gauss=request.bias_field_gauss)
        d3 = raman_mod.delta_three_level(cfg)
        d4 = raman_mod.delta_four_level(cfg)
        contrast = raman_mod.selectivity_contrast(
            raman_mod.tuned_to(cfg, raman_mod.THREE_LEVEL)
        )
        spectrum = raman_mod.selectivity_spectrum(
            cfg,
            (TWO_PI * request.delta_min_mhz, TWO_PI * request.delta_max_mhz),
            request.n_points,
        )
    except (ValueError, ArithmeticError) as exc:
        raise _bad_request(exc) from exc
    rows = [
        RamanRow(delta_mhz=delta / TWO_PI, p_target=p3, p_blocked=p4)
        for delta, p3, p4 in spectrum
    ]
    return RamanResponse(
        config_echo=_echo(scenario),
        resonance_three_mhz=d3 / TWO_PI,
        resonance_four_mhz=d4 / TWO_PI,
        contrast_on_resonance=contrast,
        rows=rows,
    )


@app.post("/simulate", response_model=SimulateResponse)
def simulate(request: SimulateRequest) -> SimulateResponse:
    scenario = _scenario(request.scenario)
    stop_events = request.stop_events
    if stop_events is None:
        stop_events = scenario.stop_events
    max_hours = request.max_hours
    if max_hours is None:
        max_hours = scenario.max_hours
    shards = request.shards
    if shards is None:
        shards = scenario.shards
    config = scenario.sequence
    try:
        summary = seqsim.run_campaign(
            config,
            stop_events=stop_events,
            max_hours=max_hours,
            shards=shards,
            seed=request.seed,
        )
        budget = seqsim.leave_one_out_budget(config)
        expected = seqsim.expected_correlators(config)
    except (ValueError, ArithmeticError) as exc:
        raise _bad_request(exc) from exc
    report = analysis.campaign_report(summary, budget=budget, expected=expected)
    return SimulateResponse(
        summary=seqsim.summary_to_dict(summary, include_records=request.include_records),
        report=report,
    )


@app.post("/coherence", response_model=CoherenceResponse)
def coherence(request: CoherenceRequest) -> CoherenceResponse:
    scenario = _scenario(request.scenario)
    if request.basis == MEMORY:
        model = scenario.sequence.memory_coherence
    elif request.basis == INITIAL:
        model = scenario.sequence.initial_coherence
    else:
        raise HTTPException(
            status_code=422, detail=f"basis must be {INITIAL!r} or {MEMORY!r}"
        )
    delays = request.delays_us
    if delays is None:
        horizon = 3.0 * model.t2_us if np.isfinite(model.t2_us) else 1000.0
        delays = np.linspace(0.0, horizon, 13).tolist()
    seed = request.seed
    if seed is None:
        seed = scenario.sequence.rng_seed
    try:
        data = synthetic_visibility_data(
            model, delays, noise_sigma=request.noise_sigma, seed=seed
        )
    except (ValueError, ArithmeticError) as exc:
        raise _bad_request(exc) from exc
    rows = [CoherenceRow(delay_us=t, visibility=v) for t, v in data]
    fit_payload = None
    fit_error = None
    try:
        fit = analysis.fit_exponential(data[:, 0], data[:, 1])
        fit_payload = {
            "t2_us": fit.t2,
            "t2_sigma_us": fit.t2_sigma,
            "v0": fit.v0,
            "v0_sigma": fit.v0_sigma,
        }
    except (analysis.FitError, ValueError) as exc:
        fit_error = str(exc)
    return CoherenceResponse(
        config_echo=_echo(scenario),
        basis=request.basis,
        t2_model_us=model.t2_us,
        rows=rows,
        fit=fit_payload,
        fit_error=fit_error,
    )


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze(request: AnalyzeRequest) -> AnalyzeResponse:
    try:
        summary = seqsim.summary_from_dict(request.summary)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    budget = None
    expected = None
    if summary.config_echo:
        try:
            config = seqsim.config_from_echo(summary.config_echo)
            budget = seqsim.leave_one_out_budget(config)
            expected = seqsim.expected_correlators(config)
        except (ValueError, ArithmeticError):
            pass  # echo from a foreign tool: report counts-only statistics
    report = analysis.campaign_report(summary, budget=budget, expected=expected)
    return AnalyzeResponse(report=report)
