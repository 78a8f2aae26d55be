"""Stroboscopic evolution and the observables separating recurrent from
diffusive behavior."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .floquet import FloquetModel
from .model import BaseHamiltonian

NORM_DRIFT_RENORM = 1e-12
TRUNCATION_TOP_FRACTION = 0.05
TRUNCATION_MASS_LIMIT = 0.01

DIFFUSIVE_EXPONENT = 0.7
RECURRENT_EXPONENT = 0.2
DEFAULT_FIT_WINDOW = (100, 10000)


@dataclass(frozen=True)
class TrajectoryRecord:
    """Observables sampled along one stroboscopic trajectory.

    n holds the recorded step indices (starting at 0). norm_drift is the
    deviation |(norm) - 1| seen at each recorded step before any
    renormalization; renormalizations counts how often the state was pulled
    back to the unit sphere. truncation_contaminated is set when the top 5%
    of basis states ever carried more than 1% of the probability, in which
    case growth labels are suppressed.
    """

    n: np.ndarray
    energy: np.ndarray
    autocorr: np.ndarray
    participation: np.ndarray
    norm_drift: np.ndarray
    renormalizations: int
    truncation_contaminated: bool
    final_state: np.ndarray

    @property
    def steps(self) -> int:
        return int(self.n[-1])


def energy_expectation(state: np.ndarray, base: BaseHamiltonian) -> float:
    """<H0> = sum_n alpha_n |x_n|^2 (exactly phase-invariant)."""
    state = np.asarray(state)
    if state.shape != (base.dim,):
        raise ValueError("invalid-input: state dimension mismatch")
    return float((base.alpha * (state.real**2 + state.imag**2)).sum())


def participation_ratio(state: np.ndarray) -> float:
    """Effective number of occupied basis states, 1 / sum_n |x_n|^4."""
    state = np.asarray(state)
    p = state.real**2 + state.imag**2
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValueError("invalid-input: state must be normalized")
    return float(1.0 / (p**2).sum())


def evolve(
    model: FloquetModel,
    psi0: np.ndarray,
    steps: int,
    record_every: int = 1,
) -> TrajectoryRecord:
    """Iterate the Floquet map from psi0 and sample observables.

    The state is renormalized whenever the norm drifts by more than 1e-12
    (count recorded). autocorr[m] is <psi0, psi_{n_m}>.
    """
    if steps < 1:
        raise ValueError("invalid-input: steps must be >= 1")
    if record_every < 1:
        raise ValueError("invalid-input: record_every must be >= 1")
    x = np.asarray(psi0, dtype=complex).copy()
    if x.shape != (model.dim,):
        raise ValueError("invalid-input: state dimension mismatch")
    if abs(np.linalg.norm(x) - 1.0) > 1e-10:
        raise ValueError("invalid-input: psi0 must be a unit vector")

    psi0 = x.copy()
    alpha = model.base.alpha
    top = int(math.ceil((1.0 - TRUNCATION_TOP_FRACTION) * model.dim))
    u, z, kick_vecs = model.u, model.z, model.pert.psi
    kick_conj = kick_vecs.conj()

    ns, energies, autocorrs, participations, drifts = [], [], [], [], []
    renorms = 0
    contaminated = False

    def record(step, drift):
        nonlocal contaminated
        p = x.real**2 + x.imag**2
        ns.append(step)
        energies.append((alpha * p).sum())
        autocorrs.append(np.vdot(psi0, x))
        participations.append(1.0 / (p**2).sum())
        drifts.append(drift)
        if p[top:].sum() > TRUNCATION_MASS_LIMIT:
            contaminated = True

    record(0, 0.0)
    for n in range(1, steps + 1):
        x = u * x
        x += (z * (kick_conj @ x)) @ kick_vecs
        drift = abs(np.linalg.norm(x) - 1.0)
        if drift > NORM_DRIFT_RENORM:
            x /= np.linalg.norm(x)
            renorms += 1
        if n % record_every == 0:
            record(n, drift)

    return TrajectoryRecord(
        n=np.array(ns),
        energy=np.array(energies),
        autocorr=np.array(autocorrs),
        participation=np.array(participations),
        norm_drift=np.array(drifts),
        renormalizations=renorms,
        truncation_contaminated=contaminated,
        final_state=x,
    )


def wiener_average(autocorr: np.ndarray, n_terms: int) -> float:
    """Time-averaged return probability (1/N) sum_{n=1..N} |autocorr[n]|^2.

    For a pure point operator with nondegenerate eigenphases this converges
    to sum_j |<v_j, psi0>|^4; a positive limit diagnoses recurrence.
    Expects autocorr recorded every step starting at n = 0.
    """
    autocorr = np.asarray(autocorr)
    if n_terms < 1 or n_terms > autocorr.size - 1:
        raise ValueError("invalid-input: n_terms exceeds recorded length")
    a = autocorr[1 : n_terms + 1]
    return float((a.real**2 + a.imag**2).mean())


@dataclass(frozen=True)
class GrowthFit:
    """Power-law fit E(n) ~ n^exponent over a step window."""

    exponent: float
    r2: float
    offset: float


def growth_fit(record_or_energy, window=DEFAULT_FIT_WINDOW, n=None) -> GrowthFit:
    """Least-squares slope of log E versus log n over the window.

    Accepts a TrajectoryRecord or a plain energy sequence (with optional
    step indices n). Non-positive energies inside the window are handled by
    shifting the whole window by (1 - min), recorded in offset.
    """
    if isinstance(record_or_energy, TrajectoryRecord):
        energy = record_or_energy.energy
        n = record_or_energy.n
    else:
        energy = np.asarray(record_or_energy, dtype=float)
        n = np.arange(energy.size) if n is None else np.asarray(n)
    lo, hi = window
    mask = (n >= lo) & (n <= hi) & (n > 0)
    if mask.sum() < 2:
        raise ValueError("invalid-input: window selects fewer than 2 samples")
    e = energy[mask].astype(float)
    offset = 0.0
    if e.min() <= 0.0:
        offset = 1.0 - e.min()
        e = e + offset
    logn = np.log(n[mask].astype(float))
    loge = np.log(e)
    slope, intercept = np.polyfit(logn, loge, 1)
    resid = loge - (slope * logn + intercept)
    ss_tot = ((loge - loge.mean()) ** 2).sum()
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - (resid**2).sum() / ss_tot
    return GrowthFit(exponent=float(slope), r2=float(r2), offset=offset)


def classify_growth(fit: GrowthFit, contaminated: bool = False) -> str:
    """Heuristic label for the fitted exponent.

    Labels are suppressed for truncation-contaminated trajectories. The
    thresholds (> 0.7 diffusive-like, < 0.2 recurrent-like) are an artifact
    convention for a qualitative claim, not measured constants.
    """
    if contaminated:
        return "suppressed"
    if fit.exponent > DIFFUSIVE_EXPONENT:
        return "diffusive-like"
    if fit.exponent < RECURRENT_EXPONENT:
        return "recurrent-like"
    return "inconclusive"
