import numpy as np
import pytest
from scipy.integrate import quad

import floquet_lab as fl


def test_delta_closed_spot_value():
    # simplified closed form at t=0: (1/2pi)(1+e^-1)/(1-e^-1)
    oracle = (1 + np.exp(-1.0)) / (1 - np.exp(-1.0)) / (2 * np.pi)
    assert fl.delta_eps_closed(0.0, 1.0) == pytest.approx(oracle, rel=1e-14)
    assert oracle == pytest.approx(0.344403, abs=5e-6)


def test_delta_closed_limits():
    # t=pi, eps -> 0: (1/2pi)(1-r)/(1+r) -> 0
    assert fl.delta_eps_closed(np.pi, 1e-8) < 1e-8
    # eps -> inf: uniform 1/2pi
    assert fl.delta_eps_closed(1.234, 60.0) == pytest.approx(1 / (2 * np.pi), rel=1e-14)
    with pytest.raises(ValueError, match="invalid-input"):
        fl.delta_eps_closed(0.0, 0.0)


def test_delta_series_base_case():
    got = fl.delta_eps_series(0.7, 0.5, terms=0)
    assert got.value == pytest.approx(1 / (2 * np.pi), rel=1e-15)


def test_delta_series_matches_closed():
    got = fl.delta_eps_series(0.3, 0.5, terms=60)
    assert abs(got.value - fl.delta_eps_closed(0.3, 0.5)) < 1e-10
    assert got.imag_residue < 1e-12


@pytest.mark.parametrize("eps", [1.0, 0.5, 0.2])
def test_delta_series_geometric_tail_bound(eps):
    closed = fl.delta_eps_closed(1.1, eps)
    for terms in (10, 20, 40, 80):
        err = abs(fl.delta_eps_series(1.1, eps, terms).value - closed)
        bound = np.exp(-eps * terms) / (np.pi * (1 - np.exp(-eps)))
        assert err <= bound * 1.0000001


def test_delta_series_empirical_rate():
    # error shrinks by ~e^-eps per added term
    eps, t = 0.3, 0.9
    closed = fl.delta_eps_closed(t, eps)
    errs = np.array(
        [abs(fl.delta_eps_series(t, eps, m).value - closed) for m in (20, 30, 40, 50)]
    )
    rates = errs[1:] / errs[:-1]
    assert np.all(rates < np.exp(-eps * 10) * 5)


@pytest.mark.parametrize("eps", [1.0, 0.1, 0.01])
def test_delta_integral_normalization(eps):
    integral, _ = quad(lambda t: float(fl.delta_eps_closed(t, eps)), -np.pi, np.pi,
                       points=[0.0], limit=200, epsabs=1e-12)
    assert abs(integral - 1.0) < 1e-8


def test_phi_lambda_zero_kappa():
    ts = np.linspace(-5, 5, 41)
    assert np.abs(fl.phi_lambda(ts, 0.0)).max() == 0.0


def test_phi_lambda_removable_singularity():
    # series-limit fill: value at 0 is pi*kappa; quadrature continuity check
    assert fl.phi_lambda(0.0, 1.0) == pytest.approx(np.pi, rel=1e-12)
    assert abs(fl.phi_lambda(1e-8, 1.0) - np.pi) < 1e-7
    assert abs(fl.phi_lambda(-1e-8, 0.5) - 0.5 * np.pi) < 1e-7


def test_phi_lambda_envelope():
    for kappa in (0.3, 1.0):
        ts = np.linspace(1e-4, 0.5, 200)
        vals = np.abs(fl.phi_lambda(ts, kappa))
        bound = np.pi * np.exp(-2 * ts) * kappa * (1 + 2 * ts * kappa)
        assert np.all(vals <= bound)
        t_large = np.linspace(3.0, 10.0, 50)
        tail = np.abs(fl.phi_lambda(t_large, kappa))
        assert np.all(tail <= np.exp(-2 * t_large) * 2 * np.pi / t_large)


def test_phi_lambda_kappa_window():
    with pytest.raises(ValueError, match="out-of-range"):
        fl.phi_lambda(0.1, 1.5)
    with pytest.raises(ValueError, match="out-of-range"):
        fl.phi_tilde_analytic(0.0, -0.1)


def test_phi_tilde_spot_value_two_routes():
    target = np.pi * np.arctan(4.0 / 3.0)
    assert fl.phi_tilde_analytic(0.0, 1.0) == pytest.approx(target, rel=1e-14)
    assert fl.phi_tilde_two_part(0.0, 1.0) == pytest.approx(target, rel=1e-14)
    # the two-part route is 2*pi*arctan(1/2) here; same number
    assert 2 * np.pi * np.arctan(0.5) == pytest.approx(target, rel=1e-15)
    got = fl.phi_tilde_numeric(0.0, 1.0)
    assert got.value == pytest.approx(target, abs=1e-8)
    assert got.imag_residue < 1e-8


def test_phi_tilde_zero_kappa():
    assert fl.phi_tilde_analytic(3.0, 0.0) == 0.0
    assert fl.phi_tilde_numeric(3.0, 0.0).value == 0.0


def test_phi_tilde_numerator_values_at_spot():
    assert fl.numerator_equation(0.0, 1.0) == pytest.approx(80.0)
    assert fl.denominator(0.0, 1.0) == pytest.approx(60.0)


@pytest.mark.parametrize("omega", [-7.3, -1.0, 0.4, 2.2, 9.9])
@pytest.mark.parametrize("kappa", [0.2, 0.7, 1.0])
def test_phi_tilde_quadrature_agreement(omega, kappa):
    num = fl.phi_tilde_numeric(omega, kappa)
    assert abs(num.value - fl.phi_tilde_analytic(omega, kappa)) < 1e-6
    assert num.imag_residue < 1e-8


def test_phi_tilde_two_part_consistency_grid():
    omegas = np.linspace(-30, 30, 121)
    for kappa in (0.25, 0.75, 1.0):
        diff = np.abs(
            fl.phi_tilde_analytic(omegas, kappa) - fl.phi_tilde_two_part(omegas, kappa)
        )
        assert diff.max() < 1e-10


def test_numerator_discrepancy_selects_equation_variant():
    report = fl.numerator_discrepancy_check()
    assert report.passed
    assert report.details["selected_variant"] == "equation"
    assert report.details["max_err_equation"] < 1e-6
    assert report.details["max_err_table"] > 1e-3


def test_sign_table_all_cells():
    report = fl.sign_table_check()
    assert report.passed
    assert report.details["failing_cells"] == []
    assert report.details["ratio_positive_equation"]
    # the table-header variant breaks positivity, consistent with quadrature
    assert not report.details["ratio_positive_table"]


def test_sign_table_specific_cells():
    # numerator term k^2(4-w^2) at omega=3 is negative (row omega>2)
    assert fl.numerator_equation(3.0, 0.5) is not None
    assert 0.5**2 * (4 - 3.0**2) < 0
    # denominator leading term positive everywhere
    for w in (-10.0, -1.0, 1.0, 10.0):
        assert (4 + w**2) ** 3 > 0


def test_positivity_on_validity_window():
    omegas = np.linspace(-40, 40, 1601)
    for kappa in np.linspace(0.05, 1.0, 20):
        vals = fl.phi_tilde_analytic(omegas, float(kappa))
        assert vals.min() > 0.0


def test_telescoping_single_term():
    report = fl.telescoping_check(6, 1, 1, seed=0)
    assert report.passed
    assert report.max_abs_error < 1e-13


def test_telescoping_random_case():
    report = fl.telescoping_check(8, 1, 20, seed=42)
    assert report.passed
    assert report.details["bound_satisfied"]


def test_telescoping_identity_operator_commutes():
    # A = 1: commutator vanishes, both sides are zero
    rng = np.random.default_rng(1)
    dim = 5
    from floquet_lab.verify import random_unitary

    v = random_unitary(dim, rng)
    phi = fl.random_state(dim, seed=2)
    w = phi.copy()
    total = 0.0j
    herm = np.eye(dim, dtype=complex)
    one_step = herm - v @ herm @ v.conj().T
    for _ in range(1, 15):
        w = v @ w
        total += np.vdot(w, one_step @ w)
    assert abs(total) < 1e-13


@pytest.mark.parametrize("dim", [4, 8, 16])
@pytest.mark.parametrize("seed", range(8))
def test_telescoping_seeded_battery(dim, seed):
    a = 1 + seed % 3
    b = a + 3 * seed
    report = fl.telescoping_check(dim, a, b, seed=seed)
    assert report.passed


def test_c_scaling_orthonormal_projection():
    pert = fl.rank_n_perturbation(np.eye(5)[:3], np.ones(3))
    assert fl.c_scaling(pert) == pytest.approx(1.0, rel=1e-14)


def test_c_scaling_diagnostic_mode():
    e0 = np.eye(4)[0]
    assert fl.c_scaling(np.array([2.0 * e0])) == pytest.approx(0.25, rel=1e-14)
    rng = np.random.default_rng(9)
    vecs = rng.normal(size=(3, 6)) * 1.7
    gram = vecs.conj() @ vecs.T
    assert fl.c_scaling(vecs) * np.linalg.eigvalsh(gram).max() == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError, match="undefined-scaling"):
        fl.c_scaling(np.zeros((1, 4)))


def test_run_all_checks_all_pass():
    reports = fl.run_all_checks()
    names = [r.name for r in reports]
    assert len(names) == len(set(names))
    for r in reports:
        assert r.passed, f"{r.name}: {r.to_dict()}"
