"""Qubit coherence decay and residual precession during storage.

Visibility decays exponentially with the basis-specific T2; the slow magnetic
drift that causes the decay also leaves a deterministic Larmor precession at
the (strongly suppressed) transition frequency of the storage basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import zeeman
from .qstate import AtomPhotonState, apply_dephasing, apply_larmor

INITIAL = "initial"
MEMORY = "memory"

# Measured coherence times of the two qubit encodings, us.
T2_INITIAL_US = 322.5
T2_MEMORY_US = 6910.0


@dataclass(frozen=True)
class CoherenceModel:
    """Exponential visibility decay plus precession for one qubit encoding."""

    basis: str
    t2_us: float
    larmor_frequency_khz: float
    v0: float = 1.0

    def __post_init__(self) -> None:
        if self.basis not in (INITIAL, MEMORY):
            raise ValueError(f"unknown basis {self.basis!r}")
        if not self.t2_us > 0.0:
            raise ValueError("T2 must be positive")
        if not 0.0 <= self.v0 <= 1.0:
            raise ValueError("initial visibility must be in [0, 1]")

    @classmethod
    def for_field(
        cls,
        basis: str,
        b_gauss: float,
        t2_us: float | None = None,
        v0: float = 1.0,
        constants: zeeman.AtomicConstants = zeeman.DEFAULT_CONSTANTS,
    ) -> "CoherenceModel":
        """Model at a given bias field, Larmor frequency from the level structure.

        The initial basis precesses at its full transition frequency; the
        memory basis at that frequency divided by the measured suppression
        ratio of the two encodings.
        """
        f_init_khz = abs(
            zeeman.transition_frequency(zeeman.INITIAL_BASIS, b_gauss, constants)
        ) * 1e3
        if basis == INITIAL:
            freq = f_init_khz
            default_t2 = T2_INITIAL_US
        elif basis == MEMORY:
            freq = f_init_khz / zeeman.suppression_factor(b_gauss, constants)
            default_t2 = T2_MEMORY_US
        else:
            raise ValueError(f"unknown basis {basis!r}")
        return cls(basis, t2_us if t2_us is not None else default_t2, freq, v0)


def visibility_at(model: CoherenceModel, t_us: float) -> float:
    """V(t) = V0 * exp(-t / T2); t must be nonnegative."""
    if t_us < 0.0:
        raise ValueError("storage time must be nonnegative")
    return model.v0 * math.exp(-t_us / model.t2_us)


def precession_phase(model: CoherenceModel, t_us: float) -> float:
    """Accumulated Larmor phase in rad after t_us of storage."""
    return 2.0 * math.pi * model.larmor_frequency_khz * 1e-3 * t_us


def evolve(state: AtomPhotonState, model: CoherenceModel, t_us: float) -> AtomPhotonState:
    """Apply storage for t_us: dephasing by V(t)/V0 and the precession phase."""
    ratio = visibility_at(model, t_us) / model.v0 if model.v0 > 0.0 else 0.0
    return apply_larmor(apply_dephasing(state, ratio), precession_phase(model, t_us))


def synthetic_visibility_data(
    model: CoherenceModel,
    delays_us,
    noise_sigma: float = 0.02,
    seed: int = 0,
):
    """Measured-looking (delay, visibility) pairs for fit validation.

    Gaussian measurement noise is generated by a Box-Muller transform of
    PCG64 uniforms so a seed pins the dataset across library versions.
    Returns an (n, 2) float array.
    """
    delays = np.asarray(delays_us, dtype=float)
    if delays.ndim != 1:
        raise ValueError("delays must be a 1-d sequence")
    if noise_sigma < 0.0:
        raise ValueError("noise level must be nonnegative")
    clean = np.array([visibility_at(model, t) for t in delays])
    u = np.random.Generator(np.random.PCG64(seed)).random((len(delays), 2))
    gauss = np.sqrt(-2.0 * np.log1p(-u[:, 0])) * np.cos(2.0 * np.pi * u[:, 1])
    return np.column_stack([delays, clean + noise_sigma * gauss])
