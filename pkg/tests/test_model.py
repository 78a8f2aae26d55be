import math

import numpy as np
import pytest

import floquet_lab as fl


def test_base_families():
    assert np.allclose(fl.build_base_hamiltonian("rotor", 4).alpha, [0, 1, 4, 9])
    assert np.allclose(fl.build_base_hamiltonian("harmonic", 3).alpha, [0.5, 1.5, 2.5])
    assert np.allclose(fl.build_base_hamiltonian("linear", 3).alpha, [0, 1, 2])
    assert np.allclose(
        fl.build_base_hamiltonian("custom", 1, custom_alpha=[2.0]).alpha, [2.0]
    )


def test_base_validation():
    with pytest.raises(ValueError, match="invalid-dimension"):
        fl.build_base_hamiltonian("rotor", 0)
    with pytest.raises(ValueError, match="invalid-input"):
        fl.build_base_hamiltonian("custom", 3, custom_alpha=[1.0, 2.0])
    with pytest.raises(ValueError):
        fl.BaseHamiltonian(alpha=np.array([np.inf]))
    with pytest.raises(ValueError):
        fl.BaseHamiltonian(alpha=np.array([1.0]), period_T=-1.0)


def test_default_period_is_golden():
    assert fl.DEFAULT_PERIOD == pytest.approx(2 * np.pi * (1 + np.sqrt(5)) / 2)


def test_materialize_power_law_magnitudes():
    prof = fl.CoefficientProfile("power_law", 3, gamma=2.0)
    v = fl.materialize_profile(prof)
    # proportional to (1, 1/4, 1/9) before normalization
    np.testing.assert_allclose(v / v[0], [1.0, 0.25, 1.0 / 9.0], rtol=1e-15)


def test_materialize_explicit_identity():
    prof = fl.CoefficientProfile("explicit", 3, values=np.array([1.0, 0, 0]))
    np.testing.assert_allclose(fl.materialize_profile(prof), [1, 0, 0], atol=0)


def test_materialize_unit_norm_compensated():
    # independent oracle: compensated summation of |v|^2
    v = fl.materialize_profile(fl.CoefficientProfile("power_law", 64, gamma=2.0))
    norm = math.sqrt(math.fsum((v.real**2 + v.imag**2).tolist()))
    assert abs(norm - 1.0) < 1e-14


def test_materialize_phases_deterministic():
    prof = fl.CoefficientProfile("power_law", 16, gamma=1.0, phase_seed=5)
    v1, v2 = fl.materialize_profile(prof), fl.materialize_profile(prof)
    np.testing.assert_array_equal(v1, v2)
    assert np.abs(v1.imag).max() > 0  # phases actually applied
    default = fl.materialize_profile(fl.CoefficientProfile("power_law", 16, gamma=1.0))
    assert np.abs(default.imag).max() == 0.0


def test_materialize_errors():
    with pytest.raises(ValueError, match="degenerate-profile"):
        fl.CoefficientProfile("explicit", 2, values=np.zeros(2))
    with pytest.raises(ValueError, match="invalid-input"):
        fl.CoefficientProfile("power_law", 4, gamma=-1.0)


def test_orthonormalize_already_orthonormal():
    vs = np.array([[1, 0, 0], [0, 1, 0]], dtype=complex)
    np.testing.assert_allclose(fl.orthonormalize(vs), vs, atol=1e-15)


def test_orthonormalize_by_hand():
    out = fl.orthonormalize(np.array([[1.0, 0.0], [1.0, 1.0]]))
    np.testing.assert_allclose(out, [[1, 0], [0, 1]], atol=1e-15)


def test_orthonormalize_gram_residual():
    v1 = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    v2 = np.array([1.0, 0.0, 0.0])
    out = fl.orthonormalize([v1, v2])
    gram = out.conj() @ out.T
    assert np.abs(gram - np.eye(2)).max() < 1e-12
    np.testing.assert_allclose(out[0], v1)  # first direction preserved


def test_orthonormalize_dependent():
    with pytest.raises(ValueError, match="dependent-vectors"):
        fl.orthonormalize(np.array([[1.0, 0.0], [1.0, 1e-13]]))


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("rank", [2, 3, 4])
def test_orthonormality_and_projector_commutativity(rank, seed):
    rng = np.random.default_rng(seed)
    vecs = rng.normal(size=(rank, 12)) + 1j * rng.normal(size=(rank, 12))
    pert = fl.rank_n_perturbation(vecs, np.ones(rank))
    gram = pert.psi.conj() @ pert.psi.T
    assert np.abs(gram - np.eye(rank)).max() < 1e-12
    # projectors built from an orthonormal family commute
    projs = [np.outer(p, p.conj()) for p in pert.psi]
    for i in range(rank):
        for j in range(rank):
            comm = projs[i] @ projs[j] - projs[j] @ projs[i]
            assert np.abs(comm).max() < 1e-12


def test_rank_bounds():
    pert = fl.rank_n_perturbation(np.eye(3), np.ones(3))  # N == dim is allowed
    assert pert.rank == 3
    with pytest.raises(ValueError, match="invalid-input"):
        fl.RankNPerturbation(psi=np.ones((4, 3)), lam=np.ones(4))


@pytest.mark.parametrize(
    "gamma,tag",
    [(2.0, "l1"), (1.5, "l1"), (1.0, "l2_only"), (0.6, "l2_only"),
     (0.5, "neither"), (0.4, "neither")],
)
def test_classify_power_law(gamma, tag):
    cls = fl.classify_summability(fl.CoefficientProfile("power_law", 32, gamma=gamma))
    assert cls.tag == tag
    assert not cls.truncated


def test_classify_monotone_in_gamma():
    order = {"neither": 0, "l2_only": 1, "l1": 2}
    gammas = np.linspace(0.1, 3.0, 30)
    tags = [
        order[fl.classify_summability(fl.CoefficientProfile("power_law", 16, gamma=g)).tag]
        for g in gammas
    ]
    assert all(a <= b for a, b in zip(tags, tags[1:]))


def test_classify_exponential_and_explicit():
    assert fl.classify_summability(
        fl.CoefficientProfile("exponential", 16, rate=0.5)
    ).tag == "l1"
    cls = fl.classify_summability(
        fl.CoefficientProfile("explicit", 3, values=np.array([1.0, 1.0, 0.0]))
    )
    assert cls.truncated  # no declared tail: classified at truncation only


def test_strongly_h_finite_basis_columns():
    e = np.eye(4, dtype=complex)
    one = fl.rank_n_perturbation([e[0]], [1.0])
    assert fl.strongly_h_finite_sum(one).value == pytest.approx(1.0, abs=1e-15)
    two = fl.rank_n_perturbation([e[0], e[1]], [1.0, 1.0])
    assert fl.strongly_h_finite_sum(two).value == pytest.approx(2.0, abs=1e-15)


def test_strongly_h_finite_rank1_equals_l1_norm():
    prof = fl.CoefficientProfile("power_law", 128, gamma=1.2, phase_seed=3)
    pert = fl.perturbation_from_profiles([prof], [1.0])
    got = fl.strongly_h_finite_sum(pert)
    l1 = math.fsum(np.abs(pert.psi[0]).tolist())
    assert abs(got.value - l1) < 1e-14
    assert got.verdict == "l1"


def test_strongly_h_finite_zeta2_tail():
    # unnormalized power-law magnitudes sum to zeta(2); rescale the l1 norm of
    # the unit vector by its normalization constant and compare (compensated)
    dim = 200000
    prof = fl.CoefficientProfile("power_law", dim, gamma=2.0)
    vec = fl.materialize_profile(prof)
    unnormalized_sum = math.fsum((np.abs(vec) / np.abs(vec[0])).tolist())
    assert abs(unnormalized_sum - math.pi**2 / 6.0) < 1e-4  # tail ~ 1/dim
    pert = fl.perturbation_from_profiles([prof], [1.0])
    got = fl.strongly_h_finite_sum(pert)
    assert abs(got.value / np.abs(vec[0]) - unnormalized_sum) < 1e-10


def test_strongly_h_finite_worst_component():
    profs = [
        fl.CoefficientProfile("power_law", 32, gamma=2.0),
        fl.CoefficientProfile("power_law", 32, gamma=0.6, phase_seed=1),
    ]
    pert = fl.perturbation_from_profiles(profs, [1.0, 0.5])
    assert fl.strongly_h_finite_sum(pert).verdict == "l2_only"
