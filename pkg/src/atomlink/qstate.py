"""Atom-photon entangled state and the noise channels acting on it.

The joint state is a 6x6 density matrix over atom (x) photon.  Atom ordering:
index 0 is m_F=-1 (spin down along z), index 1 is m_F=+1 (spin up), index 2 is
the m_F=0 leakage level which carries no logical information and reads out as
the "minus" outcome.  Photon ordering: index 0 is |L>, index 1 is |R>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOM_DIM = 3
PHOTON_DIM = 2
DIM = ATOM_DIM * PHOTON_DIM

ATOM_DOWN, ATOM_UP, ATOM_LEAK = 0, 1, 2
PHOTON_L, PHOTON_R = 0, 1

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10

# Pauli triads.  "Plus" outcomes are spin up / |R>; the matrices below satisfy
# SX @ SY = 1j * SZ with that ordering.
_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
_SZ = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
_ID2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class AtomPhotonState:
    """Validated 6x6 density matrix, atom (x) photon ordering as above."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.array(self.rho, dtype=complex)
        if rho.shape != (DIM, DIM):
            raise ValueError(f"state must be {DIM}x{DIM}, got {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
            raise ValueError("state is not Hermitian")
        if abs(np.trace(rho).real - 1.0) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
            raise ValueError("state trace is not 1")
        if np.linalg.eigvalsh(rho)[0] < PSD_TOL:
            raise ValueError("state has a negative eigenvalue")
        object.__setattr__(self, "rho", rho)

    def atom_marginal(self) -> np.ndarray:
        """Partial trace over the photon, 3x3."""
        blocks = self.rho.reshape(ATOM_DIM, PHOTON_DIM, ATOM_DIM, PHOTON_DIM)
        return np.einsum("ipjp->ij", blocks)

    def photon_marginal(self) -> np.ndarray:
        blocks = self.rho.reshape(ATOM_DIM, PHOTON_DIM, ATOM_DIM, PHOTON_DIM)
        return np.einsum("ipiq->pq", blocks)


def ideal_entangled_state() -> AtomPhotonState:
    """(|down,L> + |up,R>)/sqrt(2) as a density matrix."""
    ket = np.zeros(DIM, dtype=complex)
    ket[ATOM_DOWN * PHOTON_DIM + PHOTON_L] = 1.0 / np.sqrt(2.0)
    ket[ATOM_UP * PHOTON_DIM + PHOTON_R] = 1.0 / np.sqrt(2.0)
    return AtomPhotonState(np.outer(ket, ket.conj()))


def _ideal_ket() -> np.ndarray:
    ket = np.zeros(DIM, dtype=complex)
    ket[ATOM_DOWN * PHOTON_DIM + PHOTON_L] = 1.0 / np.sqrt(2.0)
    ket[ATOM_UP * PHOTON_DIM + PHOTON_R] = 1.0 / np.sqrt(2.0)
    return ket


def _atom_factor_map(state: AtomPhotonState, factors: np.ndarray) -> AtomPhotonState:
    """Scale every atom-index block (a, a') of rho by factors[a, a']."""
    scale = np.kron(factors, np.ones((PHOTON_DIM, PHOTON_DIM)))
    return AtomPhotonState(state.rho * scale)


def apply_dephasing(state: AtomPhotonState, v: float) -> AtomPhotonState:
    """Dephase the down/up atom coherence by visibility factor v in [0, 1].

    Models averaging over a Gaussian random phase split symmetrically between
    the two qubit levels: the down/up coherence blocks shrink by v, coherences
    with the leakage level by v**(1/4) (same phase distribution, half the
    phase), and all populations are untouched.  The map is a mixture of
    diagonal unitaries, so it is completely positive for any input.
    """
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"dephasing factor must be in [0, 1], got {v}")
    leak = v ** 0.25
    factors = np.array(
        [
            [1.0, v, leak],
            [v, 1.0, leak],
            [leak, leak, 1.0],
        ]
    )
    return _atom_factor_map(state, factors)


def apply_larmor(state: AtomPhotonState, phi: float) -> AtomPhotonState:
    """Unitary precession phase e^{i phi} between up and down, split +/- phi/2."""
    u_atom = np.diag(
        [np.exp(-0.5j * phi), np.exp(0.5j * phi), 1.0]
    )
    u = np.kron(u_atom, _ID2)
    return AtomPhotonState(u @ state.rho @ u.conj().T)


def mix_uncorrelated_noise(state: AtomPhotonState, p: float) -> AtomPhotonState:
    """With probability p replace the photon by a maximally mixed one.

    This is what an accidental (converter background or dark) click does to
    the recorded statistics: the atom marginal is kept, all atom-photon
    correlations vanish on the mixed branch.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing probability must be in [0, 1], got {p}")
    uncorrelated = np.kron(state.atom_marginal(), _ID2 / 2.0)
    return AtomPhotonState((1.0 - p) * state.rho + p * uncorrelated)


@dataclass(frozen=True)
class MeasurementSetting:
    """One joint measurement: photon polarization basis plus atom Bloch direction.

    photon_angle_rad is the linear-polarization analysis angle (Bloch azimuth
    is twice the angle); None selects the circular {L, R} eigenbasis.  The atom
    direction is given directly as Bloch polar/azimuth angles in the down/up
    qubit subspace; the leakage level always reads out as "minus".
    """

    photon_angle_rad: float | None
    atom_polar_rad: float
    atom_azimuth_rad: float

    @staticmethod
    def circular_z() -> "MeasurementSetting":
        return MeasurementSetting(None, 0.0, 0.0)

    @staticmethod
    def equatorial(photon_angle_rad: float, atom_azimuth_rad: float) -> "MeasurementSetting":
        return MeasurementSetting(photon_angle_rad, np.pi / 2.0, atom_azimuth_rad)


def _photon_observable(setting: MeasurementSetting) -> np.ndarray:
    if setting.photon_angle_rad is None:
        return _SZ.copy()
    chi = 2.0 * setting.photon_angle_rad
    return np.cos(chi) * _SX + np.sin(chi) * _SY


def _atom_observable(setting: MeasurementSetting) -> np.ndarray:
    """3x3 outcome observable: Bloch direction on the qubit, -1 on leakage."""
    theta, phi = setting.atom_polar_rad, setting.atom_azimuth_rad
    qubit = (
        np.sin(theta) * np.cos(phi) * _SX
        + np.sin(theta) * np.sin(phi) * _SY
        + np.cos(theta) * _SZ
    )
    full = np.zeros((ATOM_DIM, ATOM_DIM), dtype=complex)
    full[:2, :2] = qubit
    full[ATOM_LEAK, ATOM_LEAK] = -1.0
    return full


def outcome_probabilities(state: AtomPhotonState, setting: MeasurementSetting) -> np.ndarray:
    """Joint outcome probabilities, shape (2, 2) indexed [atom +/-][photon +/-].

    Index 0 is the "plus" outcome on each side.  Leakage population lands in
    the atom "minus" row.
    """
    a_obs = _atom_observable(setting)
    p_obs = _photon_observable(setting)
    eye3 = np.eye(ATOM_DIM, dtype=complex)
    a_plus = (eye3 + a_obs) / 2.0
    p_plus = (_ID2 + p_obs) / 2.0
    probs = np.empty((2, 2))
    for ai, a_proj in enumerate((a_plus, eye3 - a_plus)):
        for pi, p_proj in enumerate((p_plus, _ID2 - p_plus)):
            probs[ai, pi] = np.trace(state.rho @ np.kron(a_proj, p_proj)).real
    return np.clip(probs, 0.0, 1.0)


def correlator(state: AtomPhotonState, setting: MeasurementSetting) -> float:
    """E = p(same) - p(different) for the two binary outcomes."""
    m = np.kron(_atom_observable(setting), _photon_observable(setting))
    return np.trace(state.rho @ m).real


def chsh_s(state: AtomPhotonState, settings: tuple[MeasurementSetting, ...]) -> float:
    """|E1 + E2 + E3 - E4| for four measurement settings."""
    if len(settings) != 4:
        raise ValueError("CHSH needs exactly four settings")
    e = [correlator(state, s) for s in settings]
    return abs(e[0] + e[1] + e[2] - e[3])


def entangled_state_fidelity(state: AtomPhotonState) -> float:
    """Overlap <psi|rho|psi> with the ideal entangled state."""
    ket = _ideal_ket()
    return float(np.real(ket.conj() @ state.rho @ ket))


def purity(state: AtomPhotonState) -> float:
    return float(np.trace(state.rho @ state.rho).real)
