"""Estimation utilities: fringe and decay fits, correlators, CHSH, fidelity.

The two fit models are three-parameter and well conditioned, so they are
solved with a small damped Gauss-Newton (Levenberg-Marquardt) loop using
analytic Jacobians; parameter uncertainties come from the linearized
covariance at the solution.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np


class FitError(RuntimeError):
    """A fit could not be performed or did not converge."""


@dataclass(frozen=True)
class SinusoidFit:
    """p(theta) = offset + amplitude * cos(2 (theta - phase)), theta in rad."""

    offset: float
    amplitude: float
    phase: float
    offset_sigma: float
    amplitude_sigma: float
    phase_sigma: float

    @property
    def visibility(self) -> float:
        return self.amplitude / self.offset

    @property
    def visibility_sigma(self) -> float:
        rel = math.hypot(
            self.amplitude_sigma / max(self.amplitude, 1e-30),
            self.offset_sigma / max(self.offset, 1e-30),
        )
        return abs(self.visibility) * rel


@dataclass(frozen=True)
class ExponentialFit:
    """v(t) = v0 * exp(-t / t2)."""

    v0: float
    t2: float
    v0_sigma: float
    t2_sigma: float


def _levenberg_marquardt(residual_jacobian, p0, max_iter=200, tol=1e-12):
    """Minimize ||r(p)||^2; residual_jacobian(p) -> (r, J).

    Returns (p, covariance).  Raises FitError if the damping loop stalls.
    """
    p = np.asarray(p0, dtype=float)
    r, jac = residual_jacobian(p)
    cost = float(r @ r)
    lam = 1e-3
    for _ in range(max_iter):
        jtj = jac.T @ jac
        jtr = jac.T @ r
        step_ok = False
        for _ in range(50):
            try:
                step = np.linalg.solve(jtj + lam * np.diag(np.diag(jtj) + 1e-30), -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            candidate = p + step
            r_new, jac_new = residual_jacobian(candidate)
            cost_new = float(r_new @ r_new)
            if cost_new <= cost:
                step_ok = True
                break
            lam *= 10.0
        if not step_ok:
            break
        converged = abs(cost - cost_new) <= tol * max(cost, 1e-30)
        p, r, jac, cost = candidate, r_new, jac_new, cost_new
        lam = max(lam * 0.3, 1e-12)
        if converged:
            break
    else:
        raise FitError("fit did not converge")
    dof = max(len(r) - len(p), 1)
    sigma2 = cost / dof
    try:
        cov = sigma2 * np.linalg.inv(jac.T @ jac)
    except np.linalg.LinAlgError:
        raise FitError("singular fit geometry") from None
    return p, cov


def fit_sinusoid(angles_rad, values) -> SinusoidFit:
    """Least-squares fringe fit; needs >= 4 points spanning >= half a period.

    The exactly equivalent linear parametrization offset + a cos2t + b sin2t
    provides the starting point, then the damped Gauss-Newton loop polishes in
    the (offset, amplitude, phase) parametrization and yields its covariance.
    """
    angles = np.asarray(angles_rad, dtype=float)
    values = np.asarray(values, dtype=float)
    if angles.shape != values.shape or angles.ndim != 1:
        raise ValueError("angles and values must be 1-d arrays of equal length")
    if len(angles) < 4:
        raise FitError("need at least four fringe points")
    if np.ptp(angles) < np.pi / 2.0 - 1e-12:
        raise FitError("fringe points must span at least half a period")

    design = np.column_stack(
        [np.ones_like(angles), np.cos(2.0 * angles), np.sin(2.0 * angles)]
    )
    (offset0, a0, b0), *_ = np.linalg.lstsq(design, values, rcond=None)
    amplitude0 = math.hypot(a0, b0)
    phase0 = 0.5 * math.atan2(b0, a0)
    if amplitude0 == 0.0:
        amplitude0 = max(np.ptp(values) / 2.0, 1e-12)

    def residual_jacobian(p):
        offset, amplitude, phase = p
        arg = 2.0 * (angles - phase)
        model = offset + amplitude * np.cos(arg)
        r = model - values
        jac = np.column_stack(
            [
                np.ones_like(angles),
                np.cos(arg),
                2.0 * amplitude * np.sin(arg),
            ]
        )
        return r, jac

    p, cov = _levenberg_marquardt(residual_jacobian, [offset0, amplitude0, phase0])
    offset, amplitude, phase = p
    if amplitude < 0.0:
        amplitude = -amplitude
        phase += np.pi / 2.0
    phase = (phase + np.pi / 2.0) % np.pi - np.pi / 2.0  # wrap to [-pi/2, pi/2)
    sigmas = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return SinusoidFit(
        offset=float(offset),
        amplitude=float(amplitude),
        phase=float(phase),
        offset_sigma=float(sigmas[0]),
        amplitude_sigma=float(sigmas[1]),
        phase_sigma=float(sigmas[2]),
    )


def fit_exponential(times_us, values) -> ExponentialFit:
    """Fit v0 * exp(-t / t2); needs >= 3 points at strictly increasing times.

    Non-decaying data yields t2 = +inf with a warning instead of an error so
    sweep pipelines stay usable.
    """
    times = np.asarray(times_us, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.shape != values.shape or times.ndim != 1:
        raise ValueError("times and values must be 1-d arrays of equal length")
    if len(times) < 3:
        raise FitError("need at least three decay points")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be strictly increasing")

    span = times[-1] - times[0]
    head = float(np.mean(values[: max(len(values) // 3, 1)]))
    tail = float(np.mean(values[-max(len(values) // 3, 1):]))
    if tail >= head or tail <= 0.0 or head <= 0.0:
        if np.polyfit(times, values, 1)[0] >= 0.0:
            warnings.warn("data does not decay; reporting infinite T2", stacklevel=2)
            return ExponentialFit(
                v0=float(np.mean(values)), t2=math.inf,
                v0_sigma=float(np.std(values) / math.sqrt(len(values))), t2_sigma=math.nan,
            )
        t2_0 = span
    else:
        t2_0 = span / math.log(head / tail)
    v0_0 = max(values[0], 1e-9)

    def residual_jacobian(p):
        v0, t2 = p
        decay = np.exp(-times / t2)
        model = v0 * decay
        r = model - values
        jac = np.column_stack([decay, v0 * decay * times / t2**2])
        return r, jac

    p, cov = _levenberg_marquardt(residual_jacobian, [v0_0, abs(t2_0)])
    if p[1] <= 0.0:
        raise FitError("decay fit produced a nonpositive T2")
    sigmas = np.sqrt(np.clip(np.diag(cov), 0.0, None))
    return ExponentialFit(
        v0=float(p[0]), t2=float(p[1]),
        v0_sigma=float(sigmas[0]), t2_sigma=float(sigmas[1]),
    )


def fidelity_lower_bound(mean_visibility: float) -> float:
    """F >= 1/6 + 5/6 * Vbar for the qubit (x) qutrit state space, clamped to [0, 1]."""
    if not -1.0 <= mean_visibility <= 1.0:
        raise ValueError("mean visibility must be in [-1, 1]")
    return min(max(1.0 / 6.0 + 5.0 / 6.0 * mean_visibility, 0.0), 1.0)


def correlator_from_counts(counts) -> tuple[float, float]:
    """(E, sigma_E) from a 2x2 outcome-count table [atom +/-][photon +/-]."""
    table = np.asarray(counts, dtype=float)
    if table.shape != (2, 2):
        raise ValueError("counts must be a 2x2 table")
    n = table.sum()
    if n <= 0:
        raise ValueError("empty counts")
    e = (table[0, 0] + table[1, 1] - table[0, 1] - table[1, 0]) / n
    sigma = math.sqrt(max(1.0 - e * e, 1.0 / n) / n)
    return float(e), float(sigma)


def chsh_from_counts(count_tables) -> tuple[float, float]:
    """|E1 + E2 + E3 - E4| and its propagated uncertainty from four 2x2 tables."""
    if len(count_tables) != 4:
        raise ValueError("CHSH needs exactly four settings")
    estimates = [correlator_from_counts(t) for t in count_tables]
    s = abs(sum(e for e, _ in estimates[:3]) - estimates[3][0])
    sigma = math.sqrt(sum(sig**2 for _, sig in estimates))
    return float(s), float(sigma)


@dataclass(frozen=True)
class ErrorBudget:
    """Named visibility-loss fractions of the entanglement distribution chain."""

    snr_readout: float = 0.0
    decoherence: float = 0.0
    raman_transfers: float = 0.0
    readout: float = 0.0
    entanglement_generation: float = 0.0
    readout_timing: float = 0.0
    drifts: float = 0.0

    def terms(self) -> dict[str, float]:
        return {
            "snr_readout": self.snr_readout,
            "decoherence": self.decoherence,
            "raman_transfers": self.raman_transfers,
            "readout": self.readout,
            "entanglement_generation": self.entanglement_generation,
            "readout_timing": self.readout_timing,
            "drifts": self.drifts,
        }


def compose_error_budget(budget: ErrorBudget, mode: str = "multiplicative") -> float:
    """Fidelity bound from a loss budget applied to a perfect state.

    multiplicative: Vbar = prod(1 - e_i); additive: Vbar = 1 - sum(e_i)
    (clamped at 0).  The composed Vbar feeds the 2x3 fidelity bound.
    """
    terms = list(budget.terms().values())
    for e in terms:
        if not 0.0 <= e <= 1.0:
            raise ValueError("budget terms must be in [0, 1]")
    if mode == "multiplicative":
        vbar = float(np.prod([1.0 - e for e in terms]))
    elif mode == "additive":
        vbar = max(1.0 - float(np.sum(terms)), 0.0)
    else:
        raise ValueError(f"unknown composition mode {mode!r}")
    return fidelity_lower_bound(vbar)


# --- campaign summaries -----------------------------------------------------


def three_basis_correlators(summary) -> dict[str, tuple[float, float]]:
    """(E, sigma) per basis label from a three-basis campaign summary."""
    out = {}
    for index, meta in enumerate(summary.plan_meta):
        if meta.get("kind") != "correlator":
            raise ValueError("summary does not come from a three-basis plan")
        out[meta["label"]] = correlator_from_counts(summary.setting_counts[index])
    return out


def fidelity_from_summary(summary) -> tuple[float, float]:
    """(F bound, sigma) from a three-basis campaign."""
    estimates = three_basis_correlators(summary)
    vbar = sum(e for e, _ in estimates.values()) / 3.0
    sigma_vbar = math.sqrt(sum(sig**2 for _, sig in estimates.values())) / 3.0
    return fidelity_lower_bound(vbar), 5.0 / 6.0 * sigma_vbar


def fringe_probabilities(summary) -> dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Per photon state: (angles_rad, p_atom_plus, counts_per_point).

    Photon states are the two outcomes of each analysis basis (four fringe
    traces for the two-basis scan), keyed by the plan's basis label plus an
    outcome sign, e.g. "HV+".
    """
    by_state: dict[str, list[tuple[float, float, float]]] = {}
    for index, meta in enumerate(summary.plan_meta):
        if meta.get("kind") != "fringe":
            raise ValueError("summary does not come from a fringe plan")
        table = summary.setting_counts[index]
        angle = math.radians(meta["angle_deg"])
        basis = meta["label"].split("@")[0]
        for outcome, suffix in ((0, "+"), (1, "-")):
            n = table[0, outcome] + table[1, outcome]
            if n == 0:
                continue
            by_state.setdefault(f"{basis}{suffix}", []).append(
                (angle, table[0, outcome] / n, n)
            )
    out = {}
    for state, rows in by_state.items():
        rows.sort()
        arr = np.array(rows, dtype=float)
        out[state] = (arr[:, 0], arr[:, 1], arr[:, 2])
    return out


def fringe_visibilities(summary) -> tuple[dict[str, SinusoidFit], float, float]:
    """Sinusoid fit per photon state plus (mean visibility, sigma)."""
    fits = {}
    for state, (angles, probs, _) in fringe_probabilities(summary).items():
        fits[state] = fit_sinusoid(angles, probs)
    if not fits:
        raise FitError("no fringe data to fit")
    visibilities = [f.visibility for f in fits.values()]
    sigmas = [f.visibility_sigma for f in fits.values()]
    vbar = float(np.mean(visibilities))
    sigma = float(np.sqrt(np.sum(np.square(sigmas))) / len(fits))
    return fits, vbar, sigma


def chsh_from_fringe(summary) -> tuple[float, float, list[str]]:
    """CHSH from the fringe grid, cells chosen from the fitted fringes.

    The two photon bases give correlator fringes 90 degrees out of phase, so
    the combination E(B1, t1) + E(B1, t2) + E(B2, t1) - E(B2, t2) with
    t2 = t1 + 45 degrees reaches 2 sqrt(2) times the visibility at the right
    t1 and basis order.  Both are chosen by maximizing the fit-predicted S
    over the measured grid (never the sampled counts, which would bias the
    estimate), then S is computed from the counts of the four chosen cells.
    Grid angles half a turn apart measure the same setting and are pooled.
    Returns (S, sigma, four pooled cell labels).
    """
    fits, _, _ = fringe_visibilities(summary)
    cells = _fringe_cells(summary)
    bases = sorted(cells)
    if len(bases) != 2:
        raise ValueError("CHSH needs a two-basis fringe scan")
    grid = sorted(cells[bases[0]])

    def predicted_e(basis: str, angle_deg: float) -> float:
        theta = math.radians(angle_deg)
        plus = fits.get(f"{basis}+")
        minus = fits.get(f"{basis}-")
        p_plus = _sinusoid_value(plus, theta) if plus else None
        p_minus = _sinusoid_value(minus, theta) if minus else None
        if p_plus is not None and p_minus is not None:
            return p_plus - p_minus
        if p_plus is not None:
            return 2.0 * p_plus - 1.0
        if p_minus is not None:
            return 1.0 - 2.0 * p_minus
        raise FitError(f"no fringe fits for basis {basis!r}")

    best = None
    for first, second in ((bases[0], bases[1]), (bases[1], bases[0])):
        for theta1 in grid:
            theta2 = min(grid, key=lambda a: _folded_distance_deg(a, theta1 + 45.0))
            s_pred = abs(
                predicted_e(first, theta1)
                + predicted_e(first, theta2)
                + predicted_e(second, theta1)
                - predicted_e(second, theta2)
            )
            if best is None or s_pred > best[0]:
                best = (s_pred, first, second, theta1, theta2)
    _, first, second, theta1, theta2 = best
    tables = [
        cells[first][theta1],
        cells[first][theta2],
        cells[second][theta1],
        cells[second][theta2],
    ]
    labels = [
        f"{first}@{theta1:g}",
        f"{first}@{theta2:g}",
        f"{second}@{theta1:g}",
        f"{second}@{theta2:g}",
    ]
    s, sigma = chsh_from_counts(tables)
    return s, sigma, labels


def _sinusoid_value(fit: SinusoidFit, theta_rad: float) -> float:
    return fit.offset + fit.amplitude * math.cos(2.0 * (theta_rad - fit.phase))


def campaign_report(summary, budget: ErrorBudget | None = None,
                    expected: dict | None = None) -> dict:
    """Reduce a campaign summary to a JSON-ready report.

    Emits the run header and per-setting counts always; basis correlators,
    fidelity bound, fringe fits and CHSH appear for the matching plan kind
    when the data supports them (degenerate data downgrades the affected
    entries to an "error" note instead of failing the report).
    """
    report: dict = {
        "seed": summary.seed,
        "shards": summary.shards,
        "generator": summary.generator,
        "n_events": summary.n_events,
        "total_attempts": summary.total_attempts,
        "active_us": summary.active_us,
        "wall_hours": summary.wall_hours,
        "noise_fraction": summary.noise_fraction,
        "truth_counts": dict(summary.truth_counts),
        "setting_counts": [
            {"label": meta.get("label", str(index)),
             "counts": np.asarray(summary.setting_counts[index]).tolist()}
            for index, meta in enumerate(summary.plan_meta)
        ],
    }
    if expected is not None:
        report["expected_correlators"] = {k: float(v) for k, v in expected.items()}
    kind = summary.plan_meta[0].get("kind") if summary.plan_meta else None
    if kind == "correlator":
        try:
            estimates = three_basis_correlators(summary)
            report["correlators"] = {
                label: {"value": e, "sigma": sig} for label, (e, sig) in estimates.items()
            }
            fidelity, sigma = fidelity_from_summary(summary)
            vbar = sum(e for e, _ in estimates.values()) / len(estimates)
            report["mean_visibility"] = vbar
            report["fidelity_lower_bound"] = {"value": fidelity, "sigma": sigma}
        except (ValueError, FitError) as exc:
            report["correlators"] = {"error": str(exc)}
    elif kind == "fringe":
        try:
            fits, vbar, vsigma = fringe_visibilities(summary)
            report["fringe_fits"] = {
                state: {
                    "offset": fit.offset, "amplitude": fit.amplitude,
                    "phase_rad": fit.phase, "visibility": fit.visibility,
                    "visibility_sigma": fit.visibility_sigma,
                }
                for state, fit in fits.items()
            }
            report["mean_visibility"] = vbar
            report["mean_visibility_sigma"] = vsigma
            report["fidelity_lower_bound"] = {
                "value": fidelity_lower_bound(max(min(vbar, 1.0), -1.0)),
                "sigma": 5.0 / 6.0 * vsigma,
            }
        except (ValueError, FitError) as exc:
            report["fringe_fits"] = {"error": str(exc)}
        try:
            s, s_sigma, cells = chsh_from_fringe(summary)
            report["chsh"] = {"s": s, "sigma": s_sigma, "cells": cells}
        except (ValueError, FitError) as exc:
            report["chsh"] = {"error": str(exc)}
    if budget is not None:
        report["error_budget"] = {k: float(v) for k, v in budget.terms().items()}
        report["composed_fidelity"] = {
            "multiplicative": compose_error_budget(budget, "multiplicative"),
            "additive": compose_error_budget(budget, "additive"),
        }
    return report


def _fringe_cells(summary) -> dict[str, dict[float, np.ndarray]]:
    """Pooled 2x2 count tables keyed by basis label and angle folded mod 180."""
    cells: dict[str, dict[float, np.ndarray]] = {}
    for index, meta in enumerate(summary.plan_meta):
        if meta.get("kind") != "fringe":
            raise ValueError("summary does not come from a fringe plan")
        basis = meta["label"].split("@")[0]
        folded = float(meta["angle_deg"] % 180.0)
        per_basis = cells.setdefault(basis, {})
        table = np.asarray(summary.setting_counts[index], dtype=float)
        per_basis[folded] = per_basis.get(folded, 0.0) + table
    return cells


def _folded_distance_deg(angle: float, target: float) -> float:
    delta = (angle - target) % 180.0
    return min(delta, 180.0 - delta)
