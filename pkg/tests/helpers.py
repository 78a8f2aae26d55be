"""Shared builders for seeded test models."""

import numpy as np

import floquet_lab as fl


def power_law_model(dim=16, gamma=2.0, lam=1.0, rank=1, phase_seed=None,
                    kind="rotor", period_T=fl.DEFAULT_PERIOD, hbar=1.0):
    """Rotor-family model with rank power-law profiles, decorrelated by seed."""
    base = fl.build_base_hamiltonian(kind, dim, period_T=period_T, hbar=hbar)
    profiles = []
    for k in range(rank):
        seed = None if phase_seed is None else phase_seed + k
        profiles.append(
            fl.CoefficientProfile("power_law", dim, gamma=gamma + 0.25 * k,
                                  phase_seed=seed)
        )
    lambdas = [lam * (1.0 + 0.3 * k) for k in range(rank)]
    pert = fl.perturbation_from_profiles(profiles, lambdas)
    return fl.FloquetModel(base=base, pert=pert)


def dense_kick_oracle(pert, hbar):
    """exp(i sum_k lambda_k |psi_k><psi_k| / hbar) via Hermitian eigendecomposition."""
    dim = pert.dim
    m = np.zeros((dim, dim), dtype=complex)
    for k in range(pert.rank):
        m += pert.lam[k] * np.outer(pert.psi[k], pert.psi[k].conj())
    w, vec = np.linalg.eigh(m)
    return (vec * np.exp(1j * w / hbar)) @ vec.conj().T
