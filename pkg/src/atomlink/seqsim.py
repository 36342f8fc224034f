"""Event-driven Monte Carlo of the entanglement-distribution sequence.

Attempts run in bursts between cooling blocks.  Each attempt can produce a
detector click from one of three sources (signal photon, converter background,
dark count); a click interrupts the burst, the qubit is transferred back and
read out, and a new cooling block starts.  Because clicks are rare the
campaign samples the geometric gap to the next click instead of looping over
attempts, so runtime scales with the number of detection events.

All randomness is drawn through inverse-CDF transforms of Generator.random()
doubles from a PCG64 bit generator; a campaign is fully determined by its
seed, shard count and configuration.  Wall-clock durations are the simulated
active timeline divided by the duty cycle.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import link as link_mod
from .decoherence import CoherenceModel, evolve, precession_phase
from .link import LinkParams
from .qstate import (
    AtomPhotonState,
    MeasurementSetting,
    apply_dephasing,
    correlator,
    ideal_entangled_state,
    mix_uncorrelated_noise,
    outcome_probabilities,
)
from .rate import TimingBudget

THREE_BASIS = "three-basis"
FRINGE = "fringe"

TRUTH_SIGNAL = "signal"
TRUTH_QFC = "qfc"
TRUTH_DARK = "dark"

FRINGE_ANGLES_DEG = tuple(np.arange(16) * 22.5)
PHOTON_BASIS_LABELS = ("HV", "DA")

_GENERATOR_NAME = f"numpy-PCG64 (numpy {np.__version__})"


@dataclass(frozen=True)
class SequenceConfig:
    """Everything the sequence simulation needs for one campaign.

    The visibility-type parameters are calibrated against measured correlation
    data: entanglement_visibility and readout_timing_visibility are static
    dephasing factors, raman_transfer_visibility applies once per transfer
    pulse (twice per attempt), drift_visibility and polarization_depolarization
    absorb run-specific slow drifts (the latter damps all bases, not just the
    equatorial ones).  pump/excitation efficiencies and the excited-state
    lifetime document the attempt budget; their success probabilities are
    already contained in the link's per-attempt collection efficiency.
    """

    link: LinkParams
    timing: TimingBudget = TimingBudget()
    memory_coherence: CoherenceModel | None = None
    initial_coherence: CoherenceModel | None = None
    pgc_ms: float = 1.0
    ramp_down_ms: float = 1.5
    field_stabilization_ms: float = 4.0
    ramp_back_ms: float = 0.5
    duty_cycle: float = 0.5
    pump_efficiency: float = 0.80
    excitation_efficiency: float = 0.90
    excited_lifetime_ns: float = 26.24
    raman_transfer_visibility: float = 0.975192
    entanglement_visibility: float = 0.989
    readout_timing_visibility: float = 0.992
    drift_visibility: float = 1.0
    polarization_depolarization: float = 0.0
    readout_flip_probability: float = 0.0235
    readout_duration_us: float = 100.0
    measurement_plan: str = THREE_BASIS
    bias_field_gauss: float = 0.2445
    rng_seed: int = 1

    def __post_init__(self) -> None:
        if self.measurement_plan not in (THREE_BASIS, FRINGE):
            raise ValueError(f"unknown measurement plan {self.measurement_plan!r}")
        if not 0.0 < self.duty_cycle <= 1.0:
            raise ValueError("duty cycle must be in (0, 1]")
        for name in (
            "pump_efficiency", "excitation_efficiency", "raman_transfer_visibility",
            "entanglement_visibility", "readout_timing_visibility", "drift_visibility",
            "polarization_depolarization", "readout_flip_probability",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        for name in ("pgc_ms", "ramp_down_ms", "field_stabilization_ms", "ramp_back_ms",
                     "readout_duration_us", "excited_lifetime_ns"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        cooling_sum_us = (self.pgc_ms + self.ramp_down_ms + self.field_stabilization_ms) * 1e3
        if abs(cooling_sum_us - self.timing.cooling_us) > 1e-6:
            raise ValueError(
                "cooling block components must sum to the timing budget's cooling time "
                f"({cooling_sum_us} us vs {self.timing.cooling_us} us)"
            )
        if self.memory_coherence is None:
            object.__setattr__(
                self,
                "memory_coherence",
                CoherenceModel.for_field("memory", self.bias_field_gauss),
            )
        if self.initial_coherence is None:
            object.__setattr__(
                self,
                "initial_coherence",
                CoherenceModel.for_field("initial", self.bias_field_gauss),
            )


@dataclass(frozen=True)
class DetectionRecord:
    """One detector click and the paired atom readout.

    truth records which physical source produced the click; the analysis
    pipeline never uses it, it exists for diagnostics.
    """

    shard: int
    attempt_index: int
    time_us: float
    readout_time_us: float
    setting_index: int
    photon_outcome: int
    atom_outcome: int
    truth: str


@dataclass
class RunSummary:
    """Aggregated campaign output: per-setting outcome counts plus bookkeeping."""

    seed: int
    shards: int
    generator: str
    config_echo: dict
    plan_meta: list[dict]
    setting_counts: np.ndarray  # (n_settings, 2, 2), [setting][atom +/-][photon +/-]
    truth_counts: dict[str, int]
    total_attempts: int
    active_us: float
    wall_hours: float
    records: list[DetectionRecord] = field(default_factory=list)

    @property
    def n_events(self) -> int:
        return int(self.setting_counts.sum())

    @property
    def noise_fraction(self) -> float:
        total = sum(self.truth_counts.values())
        if total == 0:
            return 0.0
        return (self.truth_counts[TRUTH_QFC] + self.truth_counts[TRUTH_DARK]) / total

    def check(self) -> None:
        if self.n_events != len(self.records):
            raise AssertionError("setting counts do not match the record log")
        if sum(self.truth_counts.values()) != self.n_events:
            raise AssertionError("truth tags do not match the record log")


def signal_state(config: SequenceConfig) -> AtomPhotonState:
    """Joint state at readout time for a signal-photon event.

    Pipeline: entanglement generation imperfection, first transfer pulse,
    storage for the photon travel time (decay plus residual precession),
    second transfer pulse, slow drifts and readout-timing dephasing, and
    polarization depolarization.  Detector-noise admixture is not part of the
    state; it enters through the click-type sampling.
    """
    travel = link_mod.travel_time_us(config.link)
    state = ideal_entangled_state()
    state = apply_dephasing(state, config.entanglement_visibility)
    state = apply_dephasing(state, config.raman_transfer_visibility)
    state = evolve(state, config.memory_coherence, travel)
    state = apply_dephasing(state, config.raman_transfer_visibility)
    state = apply_dephasing(
        state, config.drift_visibility * config.readout_timing_visibility
    )
    return mix_uncorrelated_noise(state, config.polarization_depolarization)


def measurement_plan(config: SequenceConfig) -> tuple[list[MeasurementSetting], list[dict]]:
    """Scheduled settings and their metadata.

    The three-basis plan compensates the deterministic precession accumulated
    during the photon travel time in its equatorial atom angles; the fringe
    plan leaves the phase free for the sinusoid fit (16 analysis angles per
    photon basis, atom Bloch azimuth twice the analysis angle).
    """
    phi = precession_phase(config.memory_coherence, link_mod.travel_time_us(config.link))
    if config.measurement_plan == THREE_BASIS:
        settings = [
            MeasurementSetting.circular_z(),
            MeasurementSetting.equatorial(0.0, -phi),
            MeasurementSetting.equatorial(np.pi / 4.0, -phi - np.pi / 2.0),
        ]
        meta = [
            {"kind": "correlator", "label": "Z"},
            {"kind": "correlator", "label": "X"},
            {"kind": "correlator", "label": "Y"},
        ]
        return settings, meta
    settings = []
    meta = []
    for basis_index, basis_label in enumerate(PHOTON_BASIS_LABELS):
        photon_angle = basis_index * np.pi / 4.0  # Bloch azimuth 0 or pi/2
        for angle_deg in FRINGE_ANGLES_DEG:
            bloch = 2.0 * math.radians(angle_deg)
            settings.append(MeasurementSetting.equatorial(photon_angle, bloch))
            meta.append(
                {
                    "kind": "fringe",
                    "label": f"{basis_label}@{angle_deg:g}",
                    "photon_basis": basis_index,
                    "angle_deg": float(angle_deg),
                }
            )
    return settings, meta


def expected_correlators(config: SequenceConfig) -> dict[str, float]:
    """Analytic measured correlators (noise admixture and readout flip included)."""
    breakdown = link_mod.click_breakdown(config.link)
    if breakdown.p_total > 0.0:
        signal_share = breakdown.p_signal / breakdown.p_total
    else:
        signal_share = 1.0
    flip = 1.0 - 2.0 * config.readout_flip_probability
    state = signal_state(config)
    settings, meta = measurement_plan(config)
    return {
        m["label"]: signal_share * flip * correlator(state, s)
        for s, m in zip(settings, meta)
    }


def _config_echo(config: SequenceConfig) -> dict:
    echo = dataclasses.asdict(config)
    return echo


# --- sampling internals ----------------------------------------------------


@dataclass
class _SettingCache:
    joint_cum: np.ndarray  # cumulative probabilities over (a,p) outcome pairs
    atom_plus: float


def _build_caches(config: SequenceConfig) -> list[_SettingCache]:
    state = signal_state(config)
    settings, _ = measurement_plan(config)
    caches = []
    for setting in settings:
        probs = outcome_probabilities(state, setting)
        flat = probs.reshape(-1)
        total = flat.sum()
        if total <= 0.0:  # pragma: no cover - probabilities always sum to 1
            raise ValueError("degenerate outcome distribution")
        caches.append(
            _SettingCache(joint_cum=np.cumsum(flat / total), atom_plus=probs[0].sum())
        )
    return caches


def _geometric(u: float, p: float) -> int:
    """Inverse-CDF geometric variate: number of attempts up to the first click."""
    if p >= 1.0:
        return 1
    return 1 + int(math.log1p(-u) / math.log1p(-p))


def _truncated_exponential(u: float, mean: float, cap: float) -> float:
    if mean <= 0.0 or cap <= 0.0:
        return 0.0
    span = -math.expm1(-cap / mean)
    return -mean * math.log1p(-u * span)


class _Timeline:
    """O(1) burst-structure clock: attempts, cooling blocks, ramps."""

    def __init__(self, config: SequenceConfig):
        self.body_us = (
            config.timing.prep_us
            + config.timing.entangle_us
            + config.timing.raman_us
            + link_mod.travel_time_us(config.link)
        )
        self.detect_offset_us = (
            config.timing.prep_us
            + config.timing.entangle_us
            + link_mod.travel_time_us(config.link)
        )
        self.cooling_us = config.timing.cooling_us
        self.ramp_back_us = config.ramp_back_ms * 1e3
        self.burst = config.timing.burst_length
        self.after_click_us = (
            config.timing.raman_us + config.readout_duration_us + self.ramp_back_us
        )
        self.pos = 0  # next attempt slot within the burst
        self.clock_us = 0.0

    def snapshot(self) -> tuple[int, float]:
        return self.pos, self.clock_us

    def restore(self, snap: tuple[int, float]) -> None:
        self.pos, self.clock_us = snap

    def advance(self, k: int) -> None:
        """Consume k attempts without a click."""
        if k <= 0:
            return
        if self.pos > 0:
            take = min(k, self.burst - self.pos)
            self.clock_us += take * self.body_us
            self.pos += take
            k -= take
            if self.pos == self.burst:
                self.clock_us += self.ramp_back_us
                self.pos = 0
        full, rem = divmod(k, self.burst)
        self.clock_us += full * (self.cooling_us + self.burst * self.body_us + self.ramp_back_us)
        if rem:
            self.clock_us += self.cooling_us + rem * self.body_us
            self.pos = rem

    def click(self, jitter_us: float) -> tuple[float, float]:
        """Run the next attempt as a click; returns (detect_time, readout_time)."""
        if self.pos == 0:
            self.clock_us += self.cooling_us
        detect = self.clock_us + self.detect_offset_us + jitter_us
        readout = self.clock_us + self.detect_offset_us + self.after_click_us - self.ramp_back_us
        self.clock_us = self.clock_us + self.detect_offset_us + self.after_click_us
        self.pos = 0
        return detect, readout

    def attempts_within(self, budget_us: float) -> int:
        """How many further clickless attempts fit into budget_us.

        An attempt that completes a burst also commits the ramp back to the
        cooling configuration, so it only counts when the ramp fits too; this
        keeps advance(attempts_within(b)) inside b exactly.
        """
        if budget_us <= 0.0:
            return 0
        n = 0
        budget = budget_us
        pos = self.pos
        if pos > 0:
            avail = self.burst - pos
            take = min(avail, int(budget / self.body_us))
            if take == avail and budget - take * self.body_us < self.ramp_back_us:
                take -= 1
            if take < avail:
                return n + max(take, 0)
            n += take
            budget -= take * self.body_us + self.ramp_back_us
        cycle = self.cooling_us + self.burst * self.body_us + self.ramp_back_us
        full = int(budget / cycle)
        n += full * self.burst
        budget -= full * cycle
        if budget >= self.cooling_us:
            budget -= self.cooling_us
            take = min(self.burst, int(budget / self.body_us))
            if take == self.burst and budget - take * self.body_us < self.ramp_back_us:
                take -= 1
            n += take
        return n


def _classify(u_type: float, breakdown: link_mod.ClickBreakdown) -> str:
    """Click source given a click happened (inverse CDF on the three sources)."""
    scaled = u_type * breakdown.p_total
    if scaled < breakdown.p_signal:
        return TRUTH_SIGNAL
    if scaled < breakdown.p_signal + breakdown.p_qfc_noise:
        return TRUTH_QFC
    return TRUTH_DARK


def _sample_outcomes(
    config: SequenceConfig,
    cache: _SettingCache,
    truth: str,
    u_a: float,
    u_b: float,
    u_flip: float,
) -> tuple[int, int]:
    """(atom_index, photon_index) with index 0 the plus outcome."""
    if truth == TRUTH_SIGNAL:
        joint = min(int(np.searchsorted(cache.joint_cum, u_a, side="right")), 3)
        a_idx, p_idx = divmod(joint, 2)
    else:
        # accidental click: polarization outcome is uniform, the atom is still
        # read out and follows its marginal under the scheduled setting
        p_idx = 0 if u_a < 0.5 else 1
        a_idx = 0 if u_b < cache.atom_plus else 1
    if u_flip < config.readout_flip_probability:
        a_idx ^= 1
    return a_idx, p_idx


def run_attempt(
    rng: np.random.Generator,
    config: SequenceConfig,
    caches: list[_SettingCache] | None = None,
    setting_index: int = 0,
    attempt_index: int = 0,
    shard: int = 0,
    detect_time_us: float = 0.0,
) -> DetectionRecord | None:
    """Sample a single attempt; None if no detector clicked.

    Unit-level entry point with one uniform for the click decision; the
    campaign loop uses geometric gap sampling instead (same distribution).
    """
    breakdown = link_mod.click_breakdown(config.link)
    if rng.random() >= breakdown.p_total:
        return None
    if caches is None:
        caches = _build_caches(config)
    u_type, u_a, u_b, u_flip = rng.random(4)
    truth = _classify(u_type, breakdown)
    a_idx, p_idx = _sample_outcomes(config, caches[setting_index], truth, u_a, u_b, u_flip)
    return DetectionRecord(
        shard=shard,
        attempt_index=attempt_index,
        time_us=detect_time_us,
        readout_time_us=detect_time_us + config.timing.raman_us + config.readout_duration_us,
        setting_index=setting_index,
        photon_outcome=1 if p_idx == 0 else -1,
        atom_outcome=1 if a_idx == 0 else -1,
        truth=truth,
    )


def _run_shard(
    config: SequenceConfig,
    rng: np.random.Generator,
    shard: int,
    stop_events: int | None,
    max_hours: float | None,
) -> tuple[np.ndarray, dict, int, float, list[DetectionRecord]]:
    breakdown = link_mod.click_breakdown(config.link)
    caches = _build_caches(config)
    n_settings = len(caches)
    counts = np.zeros((n_settings, 2, 2), dtype=np.int64)
    truth_counts = {TRUTH_SIGNAL: 0, TRUTH_QFC: 0, TRUTH_DARK: 0}
    records: list[DetectionRecord] = []

    if stop_events is None and max_hours is None:
        raise ValueError("campaign needs a stop condition (events or hours)")
    if breakdown.p_total <= 0.0 and max_hours is None and (stop_events or 0) > 0:
        raise ValueError("click probability is zero; an event-count stop cannot finish")

    limit_active_us = math.inf
    if max_hours is not None:
        limit_active_us = max_hours * config.duty_cycle * 3.6e9

    timeline = _Timeline(config)
    window_us = config.link.window_ns * 1e-3
    lifetime_us = config.excited_lifetime_ns * 1e-3
    attempts = 0
    events = 0

    while stop_events is None or events < stop_events:
        draws = rng.random(6)
        if breakdown.p_total <= 0.0:
            attempts += timeline.attempts_within(limit_active_us - timeline.clock_us)
            timeline.clock_us = limit_active_us
            break
        gap = _geometric(draws[0], breakdown.p_total)
        truth = _classify(draws[1], breakdown)
        if truth == TRUTH_SIGNAL:
            jitter = _truncated_exponential(draws[5], lifetime_us, window_us)
        else:
            jitter = draws[5] * window_us  # accidental clicks are flat in the window
        snap = timeline.snapshot()
        timeline.advance(gap - 1)
        detect_time, readout_time = timeline.click(jitter)
        if detect_time > limit_active_us:
            timeline.restore(snap)
            attempts += timeline.attempts_within(limit_active_us - timeline.clock_us)
            timeline.clock_us = limit_active_us
            break
        attempts += gap
        setting_index = events % n_settings
        a_idx, p_idx = _sample_outcomes(
            config, caches[setting_index], truth, draws[2], draws[3], draws[4]
        )
        records.append(
            DetectionRecord(
                shard=shard,
                attempt_index=attempts - 1,
                time_us=detect_time,
                readout_time_us=readout_time,
                setting_index=setting_index,
                photon_outcome=1 if p_idx == 0 else -1,
                atom_outcome=1 if a_idx == 0 else -1,
                truth=truth,
            )
        )
        counts[setting_index, a_idx, p_idx] += 1
        truth_counts[truth] += 1
        events += 1
        if timeline.clock_us >= limit_active_us:
            break

    return counts, truth_counts, attempts, timeline.clock_us, records


def run_campaign(
    config: SequenceConfig,
    stop_events: int | None = None,
    max_hours: float | None = None,
    shards: int = 1,
    seed: int | None = None,
) -> RunSummary:
    """Run a detection campaign and aggregate per-setting outcome counts.

    Shards are independent deterministic substreams (SeedSequence spawning);
    the merged summary is the order-independent sum of the shard counts, and
    active/wall times add up across shards (total machine time, not a single
    physical timeline).
    """
    if shards < 1:
        raise ValueError("shard count must be at least 1")
    if stop_events is not None and stop_events < 0:
        raise ValueError("stop_events must be nonnegative")
    campaign_seed = config.rng_seed if seed is None else seed
    children = np.random.SeedSequence(campaign_seed).spawn(shards)

    per_shard_events: list[int | None]
    if stop_events is None:
        per_shard_events = [None] * shards
    else:
        base, extra = divmod(stop_events, shards)
        per_shard_events = [base + (1 if i < extra else 0) for i in range(shards)]

    _, meta = measurement_plan(config)
    total_counts = np.zeros((len(meta), 2, 2), dtype=np.int64)
    truth_totals = {TRUTH_SIGNAL: 0, TRUTH_QFC: 0, TRUTH_DARK: 0}
    all_records: list[DetectionRecord] = []
    attempts = 0
    active_us = 0.0
    for shard_index, (child, shard_stop) in enumerate(zip(children, per_shard_events)):
        rng = np.random.Generator(np.random.PCG64(child))
        counts, truths, shard_attempts, shard_active, records = _run_shard(
            config, rng, shard_index, shard_stop, max_hours
        )
        total_counts += counts
        for key, value in truths.items():
            truth_totals[key] += value
        all_records.extend(records)
        attempts += shard_attempts
        active_us += shard_active

    summary = RunSummary(
        seed=campaign_seed,
        shards=shards,
        generator=_GENERATOR_NAME,
        config_echo=_config_echo(config),
        plan_meta=meta,
        setting_counts=total_counts,
        truth_counts=truth_totals,
        total_attempts=attempts,
        active_us=active_us,
        wall_hours=active_us / config.duty_cycle / 3.6e9,
        records=all_records,
    )
    summary.check()
    return summary


def sample_click_counts(
    rng: np.random.Generator, params: LinkParams, n_attempts: int
) -> dict[str, int]:
    """Vectorized per-attempt click sampling for convergence checks.

    Returns counts by source over n_attempts Bernoulli trials with the link's
    per-attempt probabilities (no timeline, no state sampling).
    """
    breakdown = link_mod.click_breakdown(params)
    u = rng.random(n_attempts)
    n_signal = int(np.count_nonzero(u < breakdown.p_signal))
    n_qfc = int(
        np.count_nonzero(
            (u >= breakdown.p_signal) & (u < breakdown.p_signal + breakdown.p_qfc_noise)
        )
    )
    n_dark = int(
        np.count_nonzero(
            (u >= breakdown.p_signal + breakdown.p_qfc_noise) & (u < breakdown.p_total)
        )
    )
    return {TRUTH_SIGNAL: n_signal, TRUTH_QFC: n_qfc, TRUTH_DARK: n_dark}


def summary_to_dict(summary: RunSummary, include_records: bool = True) -> dict:
    """JSON-ready document for export; summary_from_dict inverts it."""
    doc = {
        "seed": summary.seed,
        "shards": summary.shards,
        "generator": summary.generator,
        "config_echo": summary.config_echo,
        "plan_meta": summary.plan_meta,
        "setting_counts": summary.setting_counts.tolist(),
        "truth_counts": summary.truth_counts,
        "total_attempts": summary.total_attempts,
        "active_us": summary.active_us,
        "wall_hours": summary.wall_hours,
    }
    if include_records:
        doc["records"] = [dataclasses.asdict(r) for r in summary.records]
    return doc


def summary_from_dict(doc: dict) -> RunSummary:
    """Rebuild a RunSummary from an exported document (records optional)."""
    try:
        return RunSummary(
            seed=doc["seed"],
            shards=doc["shards"],
            generator=doc.get("generator", "unknown"),
            config_echo=doc.get("config_echo", {}),
            plan_meta=doc["plan_meta"],
            setting_counts=np.asarray(doc["setting_counts"], dtype=np.int64),
            truth_counts=doc.get(
                "truth_counts", {TRUTH_SIGNAL: 0, TRUTH_QFC: 0, TRUTH_DARK: 0}
            ),
            total_attempts=doc.get("total_attempts", 0),
            active_us=doc.get("active_us", 0.0),
            wall_hours=doc.get("wall_hours", 0.0),
            records=[DetectionRecord(**r) for r in doc.get("records", [])],
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a campaign summary document: {exc}") from exc


def config_from_echo(echo: dict) -> SequenceConfig:
    """Rebuild the SequenceConfig embedded in a summary's config echo."""
    data = dict(echo)
    try:
        data["link"] = LinkParams(**data["link"])
        data["timing"] = TimingBudget(**data["timing"])
        data["memory_coherence"] = CoherenceModel(**data["memory_coherence"])
        data["initial_coherence"] = CoherenceModel(**data["initial_coherence"])
        return SequenceConfig(**data)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"not a sequence config echo: {exc}") from exc


def leave_one_out_budget(config: SequenceConfig):
    """Visibility-loss attribution per channel, as an analysis ErrorBudget.

    Each term is 1 - Vbar(full model) / Vbar(channel disabled), evaluated on
    the analytic three-basis correlators.  The drift term combines the slow
    drift dephasing and the polarization depolarization of the run.
    """
    from .analysis import ErrorBudget

    base = replace(config, measurement_plan=THREE_BASIS)

    def vbar(cfg: SequenceConfig) -> float:
        expected = expected_correlators(cfg)
        return (expected["X"] + expected["Y"] + expected["Z"]) / 3.0

    full = vbar(base)

    def attribution(**overrides) -> float:
        disabled = vbar(replace(base, **overrides))
        if disabled <= 0.0:
            return 0.0
        return 1.0 - full / disabled

    noiseless_link = replace(base.link, background_cps=0.0, dark_cps=0.0)
    no_decay = replace(
        base.memory_coherence, t2_us=math.inf
    )
    return ErrorBudget(
        snr_readout=attribution(link=noiseless_link),
        decoherence=attribution(memory_coherence=no_decay),
        raman_transfers=attribution(raman_transfer_visibility=1.0),
        readout=attribution(readout_flip_probability=0.0),
        entanglement_generation=attribution(entanglement_visibility=1.0),
        readout_timing=attribution(readout_timing_visibility=1.0),
        drifts=attribution(drift_visibility=1.0, polarization_depolarization=0.0),
    )
