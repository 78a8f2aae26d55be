"""Base Hamiltonians, perturbation coefficient profiles and rank-N kicks.

The system under study is a pure-point Hamiltonian H0 (diagonal in its own
eigenbasis, eigenvalues alpha_n) kicked once per period T by a rank-N
operator sum_k lambda_k |psi_k><psi_k| with orthonormal psi_k. Everything
here is a truncation to the first `dim` basis states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

# Default kick period: 2*pi times the golden ratio, so T*alpha_n/hbar mod 2pi
# stays away from rational resonances for the shipped eigenvalue families.
DEFAULT_PERIOD = 2.0 * math.pi * GOLDEN_RATIO
DEFAULT_HBAR = 1.0

ORTHONORMALITY_TOL = 1e-12
DEPENDENCY_TOL = 1e-10

_FAMILIES = ("power_law", "exponential", "explicit")
_KINDS = ("rotor", "linear", "harmonic", "custom")


@dataclass(frozen=True)
class BaseHamiltonian:
    """Truncated pure-point base Hamiltonian: eigenvalues plus kick period."""

    alpha: np.ndarray
    period_T: float = DEFAULT_PERIOD
    hbar: float = DEFAULT_HBAR

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        if alpha.ndim != 1 or alpha.size < 1:
            raise ValueError("invalid-dimension: need at least one eigenvalue")
        if not np.all(np.isfinite(alpha)):
            raise ValueError("invalid-input: eigenvalues must be finite")
        if not self.period_T > 0:
            raise ValueError("invalid-input: period_T must be positive")
        if not self.hbar > 0:
            raise ValueError("invalid-input: hbar must be positive")
        alpha = alpha.copy()
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    @property
    def dim(self) -> int:
        return self.alpha.size

    def propagator_phases(self) -> np.ndarray:
        """Diagonal of the free propagator U: exp(-i T alpha_n / hbar)."""
        return np.exp(-1j * self.period_T * self.alpha / self.hbar)


def build_base_hamiltonian(
    kind: str,
    dim: int,
    custom_alpha=None,
    period_T: float = DEFAULT_PERIOD,
    hbar: float = DEFAULT_HBAR,
) -> BaseHamiltonian:
    """Construct one of the shipped eigenvalue families.

    kind: "rotor" (alpha_n = n^2), "linear" (n), "harmonic" (n + 1/2) or
    "custom" (eigenvalues supplied in custom_alpha, length dim).
    """
    if dim < 1:
        raise ValueError("invalid-dimension: dim must be >= 1")
    n = np.arange(dim, dtype=float)
    if kind == "rotor":
        alpha = n**2
    elif kind == "linear":
        alpha = n
    elif kind == "harmonic":
        alpha = n + 0.5
    elif kind == "custom":
        if custom_alpha is None:
            raise ValueError("invalid-input: custom kind needs custom_alpha")
        alpha = np.asarray(custom_alpha, dtype=float)
        if alpha.shape != (dim,):
            raise ValueError(
                "invalid-input: custom_alpha must supply exactly dim eigenvalues"
            )
    else:
        raise ValueError(f"invalid-input: unknown kind {kind!r}, expected one of {_KINDS}")
    return BaseHamiltonian(alpha=alpha, period_T=period_T, hbar=hbar)


@dataclass(frozen=True)
class CoefficientProfile:
    """Recipe for one perturbation vector in the H0 eigenbasis.

    family "power_law": magnitudes proportional to (n+1)^(-gamma), gamma > 0.
    family "exponential": magnitudes proportional to exp(-rate*n), rate > 0.
    family "explicit": the complex values are given directly.

    phase_seed, when set, puts deterministic pseudo-random unit phases on the
    generated magnitudes (power_law / exponential only; explicit values carry
    their own phases). Default is all-real-positive.
    """

    family: str
    dim: int
    gamma: float | None = None
    rate: float | None = None
    values: np.ndarray | None = None
    phase_seed: int | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(
                f"invalid-input: unknown family {self.family!r}, expected one of {_FAMILIES}"
            )
        if self.dim < 1:
            raise ValueError("invalid-dimension: dim must be >= 1")
        if self.family == "power_law":
            if self.gamma is None or not self.gamma > 0:
                raise ValueError("invalid-input: power_law needs gamma > 0")
        elif self.family == "exponential":
            if self.rate is None or not self.rate > 0:
                raise ValueError("invalid-input: exponential needs rate > 0")
        else:
            if self.values is None:
                raise ValueError("invalid-input: explicit family needs values")
            vals = np.asarray(self.values, dtype=complex)
            if vals.shape != (self.dim,):
                raise ValueError("invalid-input: explicit values must have length dim")
            if not np.any(vals):
                raise ValueError("degenerate-profile: explicit values are all zero")
            vals = vals.copy()
            vals.setflags(write=False)
            object.__setattr__(self, "values", vals)


def materialize_profile(profile: CoefficientProfile) -> np.ndarray:
    """Materialize a profile as a unit l2-norm complex vector."""
    if profile.family == "explicit":
        vec = np.array(profile.values, dtype=complex)
    else:
        n = np.arange(profile.dim, dtype=float)
        if profile.family == "power_law":
            mag = (n + 1.0) ** (-profile.gamma)
        else:
            mag = np.exp(-profile.rate * n)
        if profile.phase_seed is not None:
            rng = np.random.default_rng(profile.phase_seed)
            vec = mag * np.exp(2j * np.pi * rng.random(profile.dim))
        else:
            vec = mag.astype(complex)
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        raise ValueError("degenerate-profile: materialized vector is zero")
    return vec / norm


@dataclass(frozen=True)
class SummabilityClass:
    """Summability verdict of the infinite family generating a profile.

    tag is decided analytically from the family parameters (a truncated
    vector is trivially l1). l1_partial is the partial sum of |a_n| of the
    materialized (unit-normalized) vector. divergence_estimate extrapolates
    the tail: remaining tail mass for convergent families, the extra growth
    accumulated by a 10x longer truncation for divergent ones. truncated is
    set when no generating family is known (explicit lists).
    """

    tag: str
    l1_partial: float
    divergence_estimate: float
    truncated: bool = False


_CLASS_ORDER = {"neither": 0, "l2_only": 1, "l1": 2}


def classify_summability(profile: CoefficientProfile) -> SummabilityClass:
    """Classify a profile as l1 / l2_only / neither.

    Power law with exponent gamma: gamma > 1 gives l1, 1/2 < gamma <= 1
    gives l2_only, gamma <= 1/2 gives neither. Exponential profiles are
    always l1. Explicit lists have no declared tail and are classified at
    truncation with the truncated flag raised.
    """
    values = materialize_profile(profile)
    l1_partial = float(math.fsum(np.abs(values)))
    if profile.family == "power_law":
        g = profile.gamma
        if g > 1.0:
            tag = "l1"
        elif g > 0.5:
            tag = "l2_only"
        else:
            tag = "neither"
        scale = float(np.abs(values[0]))  # |a_0| = normalization constant
        d = profile.dim
        if g > 1.0:
            est = scale * d ** (1.0 - g) / (g - 1.0)
        elif g == 1.0:
            est = scale * math.log(10.0)
        else:
            est = scale * ((10.0 * d) ** (1.0 - g) - d ** (1.0 - g)) / (1.0 - g)
        return SummabilityClass(tag, l1_partial, est)
    if profile.family == "exponential":
        scale = float(np.abs(values[0]))
        est = scale * math.exp(-profile.rate * profile.dim) / (-math.expm1(-profile.rate))
        return SummabilityClass("l1", l1_partial, est)
    return SummabilityClass("l1", l1_partial, 0.0, truncated=True)


def orthonormalize(vectors, tol: float = DEPENDENCY_TOL) -> np.ndarray:
    """Gram-Schmidt with one reorthogonalization pass.

    Returns a (K, dim) array of orthonormal rows spanning the input; the
    direction of the first vector is preserved. Raises on rank deficiency
    (pivot norm below tol).
    """
    vs = np.atleast_2d(np.asarray(vectors, dtype=complex))
    out = []
    for k, v in enumerate(vs):
        w = v.astype(complex).copy()
        for _ in range(2):
            for u in out:
                w -= np.vdot(u, w) * u
        norm = np.linalg.norm(w)
        if norm < tol:
            raise ValueError(f"dependent-vectors: vector {k} is linearly dependent")
        out.append(w / norm)
    return np.array(out)


@dataclass(frozen=True)
class RankNPerturbation:
    """Rank-N kick: orthonormal vectors psi_k (rows of psi) and strengths lam.

    Orthonormality is enforced at construction; profiles optionally records
    the generating recipes for later summability verdicts.
    """

    psi: np.ndarray
    lam: np.ndarray
    profiles: tuple[CoefficientProfile, ...] | None = None

    def __post_init__(self):
        psi = np.atleast_2d(np.asarray(self.psi, dtype=complex))
        lam = np.atleast_1d(np.asarray(self.lam, dtype=float))
        if psi.shape[0] != lam.size:
            raise ValueError("invalid-input: need one strength per vector")
        if psi.shape[0] > psi.shape[1]:
            raise ValueError("invalid-input: rank N exceeds dimension")
        gram = psi.conj() @ psi.T
        if np.abs(gram - np.eye(psi.shape[0])).max() > ORTHONORMALITY_TOL:
            raise ValueError("invalid-input: vectors are not orthonormal")
        psi = psi.copy()
        psi.setflags(write=False)
        lam = lam.copy()
        lam.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "lam", lam)

    @property
    def rank(self) -> int:
        return self.psi.shape[0]

    @property
    def dim(self) -> int:
        return self.psi.shape[1]


def rank_n_perturbation(vectors, lambdas, profiles=None) -> RankNPerturbation:
    """Build a RankNPerturbation, orthonormalizing the given vectors."""
    psi = orthonormalize(vectors)
    return RankNPerturbation(psi=psi, lam=np.asarray(lambdas, dtype=float),
                             profiles=tuple(profiles) if profiles else None)


def perturbation_from_profiles(profiles, lambdas) -> RankNPerturbation:
    """Materialize profiles and assemble the rank-N perturbation."""
    profiles = tuple(profiles)
    vecs = [materialize_profile(p) for p in profiles]
    return rank_n_perturbation(vecs, lambdas, profiles=profiles)


@dataclass(frozen=True)
class StrongHFiniteSum:
    """Truncated strongly-H-finite sum plus the per-family verdict."""

    value: float
    verdict: str
    truncated: bool


def strongly_h_finite_sum(pert: RankNPerturbation) -> StrongHFiniteSum:
    """Partial sum sum_n sqrt(sum_k |(a_k)_n|^2) over the truncated basis.

    For the stacked coefficient matrix A this is sum_n |A phi_n| at
    truncation; for a rank-1 perturbation it reduces to the l1 norm of the
    coefficient vector. The verdict is the weakest summability class among
    the generating profiles; without recorded profiles the verdict is the
    trivial truncated classification.
    """
    column_norms = np.sqrt((np.abs(pert.psi) ** 2).sum(axis=0))
    value = float(math.fsum(column_norms))
    if pert.profiles:
        classes = [classify_summability(p) for p in pert.profiles]
        verdict = min((c.tag for c in classes), key=_CLASS_ORDER.get)
        truncated = any(c.truncated for c in classes)
    else:
        verdict, truncated = "l1", True
    return StrongHFiniteSum(value=value, verdict=verdict, truncated=truncated)
