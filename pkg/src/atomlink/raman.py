"""Stimulated Raman transfer between the initial and memory qubit pairs.

Two transfer schemes share one laser pair: the "three-level" scheme moves
(1,+1) -> (2,+1) through the F'=2, m'=+2 state, the "four-level" scheme moves
(1,-1) -> (2,-1) through the two m'=0 states of the D1 excited manifold.  The
bias field splits their two-photon resonances so one pulse addresses exactly
one scheme.

Angular-frequency units (rad/us, i.e. 2*pi times MHz) are used throughout;
durations are in us, fields in gauss.  Level shifts are linearized with the
g-factor magnitudes |g_F| = 1/2 and |g_F'| = 1/6, which keeps the analytic
detunings exactly linear in the field and matches the brute-force propagator
built from the same shifts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .zeeman import DEFAULT_CONSTANTS

TWO_PI = 2.0 * np.pi

G_F = 0.5
G_F_EXCITED = 1.0 / 6.0
MU_B_ANGULAR = TWO_PI * DEFAULT_CONSTANTS.mu_b_mhz_per_gauss  # rad/us per gauss
EXCITED_SPLITTING = TWO_PI * DEFAULT_CONSTANTS.excited_hfs_splitting_mhz  # rad/us

THREE_LEVEL = "three-level"
FOUR_LEVEL = "four-level"
_SCHEMES = (THREE_LEVEL, FOUR_LEVEL)

_MIN_DENOMINATOR = 1e-9  # rad/us


class SingularDetuningError(ArithmeticError):
    """A light-shift or elimination denominator vanished."""


@dataclass(frozen=True)
class RamanConfig:
    """Laser and field parameters of one Raman pulse.

    rabi_mk / rabi_nk couple the three-level scheme's two legs; rabi_a3/b3 and
    rabi_a4/b4 couple the four-level scheme's legs through F'=1 and F'=2.  All
    Rabi rates and detunings are angular (rad/us).  two_photon_detuning is the
    difference-frequency offset delta scanned in spectra.
    """

    bias_field_gauss: float = 0.2445
    mean_detuning: float = TWO_PI * 2700.0
    rabi_mk: float = 115.427046
    rabi_nk: float = 115.427046
    rabi_a3: float = 81.619555
    rabi_b3: float = 81.619555
    rabi_a4: float = 81.619555
    rabi_b4: float = 81.619555
    two_photon_detuning: float = 0.0
    pulse_us: float = 8.0

    def __post_init__(self) -> None:
        if self.pulse_us < 0.0:
            raise ValueError("pulse duration must be nonnegative")
        rabi_max = max(
            abs(self.rabi_mk), abs(self.rabi_nk),
            abs(self.rabi_a3), abs(self.rabi_b3),
            abs(self.rabi_a4), abs(self.rabi_b4),
        )
        if abs(self.mean_detuning) < 10.0 * rabi_max:
            warnings.warn(
                "mean detuning is not large compared to the Rabi rates; "
                "adiabatic elimination is inaccurate",
                stacklevel=2,
            )


def default_config(
    bias_field_gauss: float = 0.2445,
    mean_detuning: float = TWO_PI * 2700.0,
    pulse_us: float = 8.0,
) -> RamanConfig:
    """Config whose resonant three-level pi time equals pulse_us.

    The three-level pair is balanced; the four-level legs are weaker by
    1/sqrt(2) each (dipole-matrix ratio of the parallel m'=0 paths), which
    leaves its combined coupling at ~0.88 of the three-level one.
    """
    elimination = mean_detuning - 2.0 * G_F_EXCITED * MU_B_ANGULAR * bias_field_gauss
    omega_eff = np.pi / pulse_us
    omega3 = np.sqrt(2.0 * abs(elimination) * omega_eff)
    omega4 = omega3 / np.sqrt(2.0)
    return RamanConfig(
        bias_field_gauss=bias_field_gauss,
        mean_detuning=mean_detuning,
        rabi_mk=omega3,
        rabi_nk=omega3,
        rabi_a3=omega4,
        rabi_b3=omega4,
        rabi_a4=omega4,
        rabi_b4=omega4,
        pulse_us=pulse_us,
    )


def _checked(denominator: float, what: str) -> float:
    if abs(denominator) < _MIN_DENOMINATOR:
        raise SingularDetuningError(f"{what} denominator vanished")
    return denominator


def delta_three_level(cfg: RamanConfig) -> float:
    """Resonant two-photon detuning of the (1,+1) -> (2,+1) transfer, rad/us.

    Zeeman term plus the differential light shift of the two legs; the
    light-shift denominator carries the excited-state Zeeman shift of the
    m'=+2 intermediate level.
    """
    zeeman = 2.0 * G_F * MU_B_ANGULAR * cfg.bias_field_gauss
    denom = _checked(
        4.0 * cfg.mean_detuning - 8.0 * G_F_EXCITED * MU_B_ANGULAR * cfg.bias_field_gauss,
        "three-level light shift",
    )
    return zeeman + (cfg.rabi_nk**2 - cfg.rabi_mk**2) / denom


def delta_four_level(cfg: RamanConfig) -> float:
    """Resonant two-photon detuning of the (1,-1) -> (2,-1) transfer, rad/us.

    Opposite Zeeman sign to the three-level scheme; the two m'=0 intermediate
    levels contribute separate light-shift terms (no linear Zeeman shift of
    their own).
    """
    zeeman = -2.0 * G_F * MU_B_ANGULAR * cfg.bias_field_gauss
    denom3 = _checked(
        4.0 * cfg.mean_detuning + 4.0 * EXCITED_SPLITTING, "four-level F'=1 light shift"
    )
    denom4 = _checked(4.0 * cfg.mean_detuning, "four-level F'=2 light shift")
    return (
        zeeman
        + (cfg.rabi_b3**2 - cfg.rabi_a3**2) / denom3
        + (cfg.rabi_b4**2 - cfg.rabi_a4**2) / denom4
    )


def effective_two_level(cfg: RamanConfig, scheme: str) -> tuple[float, float]:
    """(Omega_eff, Delta_eff) of the adiabatically eliminated two-level problem.

    Omega_eff is the two-photon coupling (nonnegative), Delta_eff the detuning
    of cfg.two_photon_detuning from the scheme's resonance.
    """
    if scheme == THREE_LEVEL:
        elimination = _checked(
            cfg.mean_detuning - 2.0 * G_F_EXCITED * MU_B_ANGULAR * cfg.bias_field_gauss,
            "three-level elimination",
        )
        omega = abs(cfg.rabi_mk * cfg.rabi_nk / (2.0 * elimination))
        return omega, cfg.two_photon_detuning - delta_three_level(cfg)
    if scheme == FOUR_LEVEL:
        d3 = _checked(cfg.mean_detuning + EXCITED_SPLITTING, "four-level F'=1 elimination")
        d4 = _checked(cfg.mean_detuning, "four-level F'=2 elimination")
        omega = abs(cfg.rabi_a3 * cfg.rabi_b3 / (2.0 * d3) + cfg.rabi_a4 * cfg.rabi_b4 / (2.0 * d4))
        return omega, cfg.two_photon_detuning - delta_four_level(cfg)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {_SCHEMES}")


def transfer_probability(cfg: RamanConfig, scheme: str) -> float:
    """Rabi transfer probability of the effective two-level problem."""
    omega, detuning = effective_two_level(cfg, scheme)
    general = np.hypot(omega, detuning)
    if general == 0.0:
        return 0.0
    amplitude = (omega / general) ** 2
    return float(amplitude * np.sin(general * cfg.pulse_us / 2.0) ** 2)


def transfer_spectrum(
    cfg: RamanConfig,
    delta_range: tuple[float, float],
    n_points: int,
    scheme: str,
) -> np.ndarray:
    """Transfer probability vs two-photon detuning, shape (n_points, 2).

    Column 0 is delta (rad/us), column 1 the transfer probability of `scheme`.
    """
    lo, hi = delta_range
    if not hi > lo:
        raise ValueError("delta range must be increasing")
    if n_points < 2:
        raise ValueError("need at least two spectrum points")
    omega, _ = effective_two_level(cfg, scheme)
    resonance = (
        delta_three_level(cfg) if scheme == THREE_LEVEL else delta_four_level(cfg)
    )
    deltas = np.linspace(lo, hi, n_points)
    detunings = deltas - resonance
    general = np.hypot(omega, detunings)
    with np.errstate(invalid="ignore", divide="ignore"):
        prob = np.where(
            general > 0.0,
            (omega / general) ** 2 * np.sin(general * cfg.pulse_us / 2.0) ** 2,
            0.0,
        )
    return np.column_stack([deltas, prob])


def selectivity_spectrum(
    cfg: RamanConfig, delta_range: tuple[float, float], n_points: int
) -> np.ndarray:
    """Both schemes on a shared delta grid: columns (delta, p_three, p_four)."""
    three = transfer_spectrum(cfg, delta_range, n_points, THREE_LEVEL)
    four = transfer_spectrum(cfg, delta_range, n_points, FOUR_LEVEL)
    return np.column_stack([three[:, 0], three[:, 1], four[:, 1]])


def selectivity_contrast(cfg: RamanConfig) -> float:
    """p(target transferred) - p(blocked transferred) at cfg's detuning.

    Meaningful when cfg.two_photon_detuning sits on one scheme's resonance:
    the other scheme is then detuned by the full Zeeman peak separation.
    """
    return transfer_probability(cfg, THREE_LEVEL) - transfer_probability(cfg, FOUR_LEVEL)


def tuned_to(cfg: RamanConfig, scheme: str) -> RamanConfig:
    """Copy of cfg with the two-photon detuning set on the scheme's resonance."""
    if scheme not in _SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {_SCHEMES}")
    resonance = delta_three_level(cfg) if scheme == THREE_LEVEL else delta_four_level(cfg)
    return replace(cfg, two_photon_detuning=resonance)


def _propagator_probability(hamiltonian: np.ndarray, t: float) -> float:
    """|<1|exp(-i H t)|0>|^2 via eigendecomposition (H time independent)."""
    energies, vectors = np.linalg.eigh(hamiltonian)
    u = vectors @ np.diag(np.exp(-1j * energies * t)) @ vectors.conj().T
    return float(np.abs(u[1, 0]) ** 2)


def full_level_transfer_probability(cfg: RamanConfig, scheme: str) -> float:
    """Transfer probability from the full rotating-frame Hamiltonian.

    No adiabatic elimination: the three-level scheme keeps its intermediate
    state, the four-level scheme both m'=0 states.  Serves as the brute-force
    reference for the effective two-level formulas.
    """
    b = cfg.bias_field_gauss
    delta = cfg.two_photon_detuning
    if scheme == THREE_LEVEL:
        z_m = -G_F * MU_B_ANGULAR * b            # (1,+1), g_F(F=1) = -1/2
        z_n = +G_F * MU_B_ANGULAR * b            # (2,+1)
        z_k = 2.0 * G_F_EXCITED * MU_B_ANGULAR * b  # (F'=2, m'=+2)
        h = np.array(
            [
                [z_m, 0.0, cfg.rabi_mk / 2.0],
                [0.0, z_n - delta, cfg.rabi_nk / 2.0],
                [cfg.rabi_mk / 2.0, cfg.rabi_nk / 2.0, z_k - cfg.mean_detuning],
            ]
        )
        return _propagator_probability(h, cfg.pulse_us)
    if scheme == FOUR_LEVEL:
        z_a = +G_F * MU_B_ANGULAR * b            # (1,-1)
        z_b = -G_F * MU_B_ANGULAR * b            # (2,-1)
        h = np.array(
            [
                [z_a, 0.0, cfg.rabi_a3 / 2.0, cfg.rabi_a4 / 2.0],
                [0.0, z_b - delta, cfg.rabi_b3 / 2.0, cfg.rabi_b4 / 2.0],
                [cfg.rabi_a3 / 2.0, cfg.rabi_b3 / 2.0,
                 -(cfg.mean_detuning + EXCITED_SPLITTING), 0.0],
                [cfg.rabi_a4 / 2.0, cfg.rabi_b4 / 2.0, 0.0, -cfg.mean_detuning],
            ]
        )
        return _propagator_probability(h, cfg.pulse_us)
    raise ValueError(f"unknown scheme {scheme!r}; expected one of {_SCHEMES}")
