"""Assembly and application of the Floquet operator.

One period of the kicked system is free evolution followed by the kick,

    V = exp(i sum_k lambda_k |psi_k><psi_k| / hbar) * exp(-i H0 T / hbar),

applied to state vectors either matrix-free in O(dim * N) per step or as a
dense matrix for diagonalization. The kick factor expands exactly as
1 + sum_k Z_k |psi_k><psi_k| with Z_k = exp(i lambda_k / hbar) - 1, which is
what the matrix-free path uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import BaseHamiltonian, RankNPerturbation

DENSE_LIMIT = 4096
KICK_PHASE_TOL = 1e-14


@dataclass(frozen=True)
class FloquetModel:
    """A base Hamiltonian paired with a rank-N kick; caches the diagonal
    propagator phases and the kick amplitudes Z_k."""

    base: BaseHamiltonian
    pert: RankNPerturbation

    def __post_init__(self):
        if self.base.dim != self.pert.dim:
            raise ValueError("invalid-input: base and perturbation dimensions differ")
        z = np.exp(1j * self.pert.lam / self.base.hbar) - 1.0
        if np.abs(np.abs(z + 1.0) - 1.0).max() > KICK_PHASE_TOL:
            raise ValueError("invalid-input: kick eigenphases left the unit circle")
        u = self.base.propagator_phases()
        z.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "u", u)

    @property
    def dim(self) -> int:
        return self.base.dim


def basis_state(dim: int, n: int = 0) -> np.ndarray:
    """The H0 eigenstate phi_n as a state vector."""
    if not 0 <= n < dim:
        raise ValueError("invalid-input: basis index out of range")
    x = np.zeros(dim, dtype=complex)
    x[n] = 1.0
    return x


def random_state(dim: int, seed=None) -> np.ndarray:
    """Seeded random unit vector (complex Gaussian, normalized)."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return x / np.linalg.norm(x)


def apply_base_propagator(base: BaseHamiltonian, x: np.ndarray) -> np.ndarray:
    """Free evolution over one period: component n picks up exp(-i T alpha_n / hbar)."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (base.dim,):
        raise ValueError("invalid-input: state dimension mismatch")
    return base.propagator_phases() * x


def apply_kick(pert: RankNPerturbation, hbar: float, x: np.ndarray) -> np.ndarray:
    """Apply the kick unitary: x + sum_k Z_k <psi_k, x> psi_k.

    Vectors orthogonal to span{psi_k} are returned unchanged (exactly).
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (pert.dim,):
        raise ValueError("invalid-input: state dimension mismatch")
    z = np.exp(1j * pert.lam / hbar) - 1.0
    overlaps = pert.psi.conj() @ x
    return x + (z * overlaps) @ pert.psi


def apply_floquet(model: FloquetModel, x: np.ndarray) -> np.ndarray:
    """One stroboscopic period: free evolution, then the kick."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (model.dim,):
        raise ValueError("invalid-input: state dimension mismatch")
    y = model.u * x
    overlaps = model.pert.psi.conj() @ y
    return y + (model.z * overlaps) @ model.pert.psi


def dense_floquet_matrix(model: FloquetModel, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Materialize V as a dense matrix (kick matrix times diagonal propagator).

    Column j equals apply_floquet(model, e_j). Refuses above dense_limit.
    """
    dim = model.dim
    if dim > dense_limit:
        raise ValueError(f"too-large: dim {dim} exceeds dense limit {dense_limit}")
    psi = model.pert.psi
    kick = np.eye(dim, dtype=complex) + (psi.T * model.z) @ psi.conj()
    return kick * model.u[np.newaxis, :]
