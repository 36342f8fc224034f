"""Ground-state Zeeman structure of the rubidium-87 memory atom.

Energies come from the Breit-Rabi expression for a J=1/2, I=3/2 atom, so the
field dependence is exact at any bias field, including the nuclear term that
dominates the (1,-1)/(2,+1) clock-like memory pair at low field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NUCLEAR_SPIN = 1.5


@dataclass(frozen=True)
class AtomicConstants:
    """Fixed atomic input data for the 87Rb ground and D1 excited manifolds.

    g_j / g_i are the fine-structure and nuclear g-factors (shared Bohr-magneton
    sign convention, hence the negative nuclear value), mu_b is in MHz/G and the
    hyperfine splittings in MHz.
    """

    g_j: float = 2.00233113
    g_i: float = -0.0009951414
    mu_b_mhz_per_gauss: float = 1.3996245
    hfs_splitting_mhz: float = 6834.682610904
    g_j_excited: float = 2.0 / 3.0          # 5P1/2
    excited_hfs_splitting_mhz: float = 814.5

    def g_f(self, f: int) -> float:
        """Lande g-factor of ground hyperfine level F (exact for J=1/2, I=3/2)."""
        if f == 1:
            return -(self.g_j - self.g_i) / 4.0 + self.g_i
        if f == 2:
            return (self.g_j - self.g_i) / 4.0 + self.g_i
        raise ValueError(f"no ground hyperfine level F={f}")

    def g_f_excited(self, f: int) -> float:
        """Lande g-factor of the D1 excited hyperfine level F' (|g_F'| ~ 1/6)."""
        if f == 1:
            return -(self.g_j_excited - self.g_i) / 4.0 + self.g_i
        if f == 2:
            return (self.g_j_excited - self.g_i) / 4.0 + self.g_i
        raise ValueError(f"no excited hyperfine level F'={f}")


DEFAULT_CONSTANTS = AtomicConstants()

# Qubit encodings used in the experiment sequence: entanglement is created in
# the (1,-1)/(1,+1) pair and transferred to the field-insensitive (1,-1)/(2,+1)
# pair for storage.
INITIAL_BASIS = ((1, -1), (1, 1))
MEMORY_BASIS = ((1, -1), (2, 1))


def _check_level(f: int, m_f: int) -> None:
    if f not in (1, 2) or abs(m_f) > f:
        raise ValueError(f"invalid ground-state level (F={f}, m_F={m_f})")


def breit_rabi_energy(
    f: int,
    m_f: int,
    b_gauss: float,
    constants: AtomicConstants = DEFAULT_CONSTANTS,
) -> float:
    """Energy of ground level |F, m_F> at bias field b_gauss, in MHz.

    Zero of energy is the hyperfine centroid at B=0.  Physical fields are
    nonnegative; the expression is analytic in B and is evaluated as written
    for negative arguments too, which the finite-difference sensitivity uses
    to straddle B=0.
    """
    _check_level(f, m_f)
    delta = constants.hfs_splitting_mhz
    x = (constants.g_j - constants.g_i) * constants.mu_b_mhz_per_gauss * b_gauss / delta
    sign = 1.0 if f == 2 else -1.0
    # 4 m / (2I+1) = m for I=3/2
    root = np.sqrt(1.0 + m_f * x + x * x)
    return (
        -delta / 8.0
        + constants.g_i * constants.mu_b_mhz_per_gauss * m_f * b_gauss
        + sign * (delta / 2.0) * root
    )


def breit_rabi_slope(
    f: int,
    m_f: int,
    b_gauss: float,
    constants: AtomicConstants = DEFAULT_CONSTANTS,
) -> float:
    """Analytic dE/dB of breit_rabi_energy, in MHz/G."""
    _check_level(f, m_f)
    delta = constants.hfs_splitting_mhz
    dx_db = (constants.g_j - constants.g_i) * constants.mu_b_mhz_per_gauss / delta
    x = dx_db * b_gauss
    sign = 1.0 if f == 2 else -1.0
    root = np.sqrt(1.0 + m_f * x + x * x)
    return (
        constants.g_i * constants.mu_b_mhz_per_gauss * m_f
        + sign * (delta / 4.0) * (m_f + 2.0 * x) * dx_db / root
    )


def transition_frequency(
    basis: tuple[tuple[int, int], tuple[int, int]],
    b_gauss: float,
    constants: AtomicConstants = DEFAULT_CONSTANTS,
) -> float:
    """Frequency of the |lower> -> |upper> qubit transition in MHz.

    For INITIAL_BASIS the B=0 offset vanishes; for MEMORY_BASIS the ground
    hyperfine splitting is included.
    """
    (f1, m1), (f2, m2) = basis
    return breit_rabi_energy(f2, m2, b_gauss, constants) - breit_rabi_energy(
        f1, m1, b_gauss, constants
    )


def basis_sensitivity(
    basis: tuple[tuple[int, int], tuple[int, int]],
    b_gauss: float,
    constants: AtomicConstants = DEFAULT_CONSTANTS,
    method: str = "difference",
) -> float:
    """First-order field sensitivity d nu / dB of a qubit transition, MHz/G.

    method="difference" uses an adaptive central difference with Richardson
    extrapolation (relative error below 1e-6); method="analytic" uses the
    closed-form Breit-Rabi derivative.  The two agree to much better than 0.1%
    and the difference path exists so the derivative can be cross-checked.
    """
    (f1, m1), (f2, m2) = basis
    if method == "analytic":
        return breit_rabi_slope(f2, m2, b_gauss, constants) - breit_rabi_slope(
            f1, m1, b_gauss, constants
        )
    if method != "difference":
        raise ValueError(f"unknown method {method!r}")

    def nu(b: float) -> float:
        return transition_frequency(basis, b, constants)

    h = max(abs(b_gauss), 1.0) * 1e-3
    previous = None
    for _ in range(20):
        coarse = (nu(b_gauss + h) - nu(b_gauss - h)) / (2.0 * h)
        fine = (nu(b_gauss + h / 2.0) - nu(b_gauss - h / 2.0)) / h
        estimate = (4.0 * fine - coarse) / 3.0
        scale = max(abs(estimate), 1e-30)
        if abs(fine - coarse) / (3.0 * scale) < 1e-6:
            return estimate
        previous = estimate
        h /= 4.0
    return previous  # pragma: no cover - converges in a few rounds


def suppression_factor(
    b_gauss: float, constants: AtomicConstants = DEFAULT_CONSTANTS, method: str = "difference"
) -> float:
    """Ratio of initial-basis to memory-basis field sensitivity, |chi|.

    The initial (1,-1)/(1,+1) pair moves at about 1.4 MHz/G while the memory
    (1,-1)/(2,+1) pair is first-order insensitive, so chi is ~500 at zero field
    (where it reduces to |g_F/g_i|) and grows slowly with bias field; both
    sensitivities are negative over the operating range, the ratio is reported
    as a magnitude.
    """
    initial = basis_sensitivity(INITIAL_BASIS, b_gauss, constants, method)
    memory = basis_sensitivity(MEMORY_BASIS, b_gauss, constants, method)
    if memory == 0.0:
        return float("inf")
    return abs(initial / memory)
