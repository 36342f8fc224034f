"""Attempt-rate and entanglement-rate budget of the sequenced experiment.

Attempts run in bursts between cooling blocks, so each attempt carries a
pro-rata share of the cooling time on top of its own pulses and the photon
round trip.  The achievable entanglement rate is duty_cycle * R * eta with R
the maximum repetition rate and eta the per-attempt detection probability.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from . import link as link_mod


@dataclass(frozen=True)
class TimingBudget:
    """Per-attempt time components, us (cooling given per burst)."""

    prep_us: float = 3.0
    entangle_us: float = 0.2
    raman_us: float = 8.0
    cooling_us: float = 6500.0
    burst_length: int = 11

    def __post_init__(self) -> None:
        for name in ("prep_us", "entangle_us", "raman_us", "cooling_us"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.burst_length < 1:
            raise ValueError("burst length must be at least 1")

    @property
    def cooling_share_us(self) -> float:
        """Cooling time apportioned to a single attempt."""
        return self.cooling_us / self.burst_length

    @property
    def zero_length_period_us(self) -> float:
        """Attempt period with zero fiber: sum of all per-attempt components."""
        return self.prep_us + self.entangle_us + self.raman_us + self.cooling_share_us


DEFAULT_TIMING = TimingBudget()


@dataclass(frozen=True)
class RateResult:
    """Rate budget at one fiber length."""

    length_km: float
    attempt_period_us: float
    repetition_rate_hz: float
    click_probability: float
    entanglement_rate_hz: float


def attempt_period_us(budget: TimingBudget, params: link_mod.LinkParams) -> float:
    """T(L) = T(0) + one-way travel time."""
    return budget.zero_length_period_us + link_mod.travel_time_us(params)


def max_repetition_rate_hz(budget: TimingBudget, params: link_mod.LinkParams) -> float:
    """Attempt rate 1 / T(L) sustained during active operation."""
    return 1e6 / attempt_period_us(budget, params)


def entanglement_rate(
    budget: TimingBudget, params: link_mod.LinkParams, duty_cycle: float = 0.5
) -> RateResult:
    """Detected-pair rate r = duty * R * eta at the given link."""
    if not 0.0 < duty_cycle <= 1.0:
        raise ValueError("duty cycle must be in (0, 1]")
    period = attempt_period_us(budget, params)
    rep = 1e6 / period
    eta = link_mod.signal_click_probability(params)
    return RateResult(
        length_km=params.length_km,
        attempt_period_us=period,
        repetition_rate_hz=rep,
        click_probability=eta,
        entanglement_rate_hz=duty_cycle * rep * eta,
    )


def rate_sweep(
    budget: TimingBudget,
    params: link_mod.LinkParams,
    lengths_km: Iterable[float],
    duty_cycle: float = 0.5,
) -> list[RateResult]:
    return [
        entanglement_rate(budget, replace(params, length_km=length), duty_cycle)
        for length in lengths_km
    ]
