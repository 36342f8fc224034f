"""Per-attempt click probabilities of the fiber link.

Three click sources compete at the detectors: the converted signal photon,
broadband background generated inside the frequency converter (which then
rides the same fiber and post-converter chain as the signal), and detector
dark counts (independent of fiber length).  All probabilities are per
entanglement attempt within the accepted detection window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable

# Fiber group velocity calibrated to the measured 101 km arrival time.
CALIBRATED_SPEED_KM_PER_S = 101.0 / 497.4e-6
TWO_THIRDS_C_KM_PER_S = 299792.458 * 2.0 / 3.0


@dataclass(frozen=True)
class LinkParams:
    """Efficiencies and noise rates of one link configuration.

    eta_collection is the per-attempt probability of a fiber-coupled photon
    and includes pump and excitation success.  background_cps is the converter
    noise rate referenced at the converter output (it still passes filter,
    projection, connectors, detector and the long fiber).  n_detectors is an
    effective count calibrating how many detectors' dark counts land inside
    the accepted window; it is a calibration parameter and need not be an
    integer.
    """

    length_km: float
    attenuation_db_per_km: float = 0.2
    photon_speed_km_per_s: float = CALIBRATED_SPEED_KM_PER_S
    eta_collection: float = 0.011
    eta_switch: float = 0.85
    eta_conversion: float = 0.48
    eta_filter: float = 0.82
    eta_projection: float = 0.85
    eta_connectors: float = 0.94
    eta_detector: float = 0.597
    window_ns: float = 50.0
    window_fraction: float = 0.62
    background_cps: float = 522.400396
    dark_cps: float = 6.266182
    n_detectors: float = 2.5

    def __post_init__(self) -> None:
        if self.length_km < 0.0:
            raise ValueError("fiber length must be nonnegative")
        if self.attenuation_db_per_km < 0.0:
            raise ValueError("attenuation must be nonnegative")
        if not self.photon_speed_km_per_s > 0.0:
            raise ValueError("photon speed must be positive")
        for name in (
            "eta_collection", "eta_switch", "eta_conversion", "eta_filter",
            "eta_projection", "eta_connectors", "eta_detector", "window_fraction",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if self.window_ns < 0.0 or self.background_cps < 0.0 or self.dark_cps < 0.0:
            raise ValueError("window and noise rates must be nonnegative")
        if self.n_detectors < 0.0:
            raise ValueError("detector count must be nonnegative")


@dataclass(frozen=True)
class ClickBreakdown:
    """Per-attempt click probabilities by source."""

    p_signal: float
    p_qfc_noise: float
    p_darkcount: float

    @property
    def p_total(self) -> float:
        return self.p_signal + self.p_qfc_noise + self.p_darkcount


def fiber_transmission(length_km: float, attenuation_db_per_km: float = 0.2) -> float:
    """Power transmission 10^(-alpha L / 10)."""
    if length_km < 0.0 or attenuation_db_per_km < 0.0:
        raise ValueError("length and attenuation must be nonnegative")
    return 10.0 ** (-attenuation_db_per_km * length_km / 10.0)


def travel_time_us(params: LinkParams) -> float:
    """One-way photon travel time through the fiber, us."""
    return params.length_km / params.photon_speed_km_per_s * 1e6


def signal_click_probability(params: LinkParams) -> float:
    """Per-attempt probability of detecting the signal photon in the window."""
    chain = (
        params.eta_collection
        * params.eta_switch
        * params.eta_conversion
        * params.eta_filter
        * params.eta_projection
        * params.eta_connectors
        * params.eta_detector
    )
    return (
        params.window_fraction
        * chain
        * fiber_transmission(params.length_km, params.attenuation_db_per_km)
    )


def noise_click_probabilities(params: LinkParams) -> tuple[float, float]:
    """(converter background, dark count) probabilities per attempt window."""
    tau_s = params.window_ns * 1e-9
    post_converter = (
        params.eta_filter * params.eta_projection * params.eta_connectors * params.eta_detector
    )
    p_qfc = (
        params.background_cps
        * post_converter
        * fiber_transmission(params.length_km, params.attenuation_db_per_km)
        * tau_s
    )
    p_dark = params.n_detectors * params.dark_cps * tau_s
    return p_qfc, p_dark


def click_breakdown(params: LinkParams) -> ClickBreakdown:
    p_qfc, p_dark = noise_click_probabilities(params)
    return ClickBreakdown(signal_click_probability(params), p_qfc, p_dark)


def snr(params: LinkParams) -> float:
    """Signal-to-noise ratio of the click statistics; +inf if noiseless."""
    breakdown = click_breakdown(params)
    noise = breakdown.p_qfc_noise + breakdown.p_darkcount
    if noise == 0.0:
        return math.inf
    return breakdown.p_signal / noise


def snr_sweep(params: LinkParams, lengths_km: Iterable[float]) -> list[ClickBreakdown]:
    """Click breakdowns at each fiber length, other parameters fixed."""
    return [click_breakdown(replace(params, length_km=length)) for length in lengths_km]
