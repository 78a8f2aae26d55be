"""Numerical toolkit for periodically rank-N kicked quantum systems.

Construct Floquet operators of kicked pure-point Hamiltonians, analyze
their quasi-energy spectra and stroboscopic dynamics, scan the
boundary-value operators whose eps -> 0 behavior locates candidate
singular-spectrum support, and verify the analytic kernel identities the
theory rests on.
"""

from .dynamics import (
    GrowthFit,
    TrajectoryRecord,
    classify_growth,
    energy_expectation,
    evolve,
    growth_fit,
    participation_ratio,
    wiener_average,
)
from .errors import (
    ConfigError,
    FloquetLabError,
    NumericalFailure,
    UnconvergedSpectrumError,
    ValidationError,
)
from .floquet import (
    DENSE_LIMIT,
    FloquetModel,
    apply_base_propagator,
    apply_floquet,
    apply_kick,
    basis_state,
    dense_floquet_matrix,
    random_state,
)
from .model import (
    DEFAULT_HBAR,
    DEFAULT_PERIOD,
    GOLDEN_RATIO,
    BaseHamiltonian,
    CoefficientProfile,
    RankNPerturbation,
    StrongHFiniteSum,
    SummabilityClass,
    build_base_hamiltonian,
    classify_summability,
    materialize_profile,
    orthonormalize,
    perturbation_from_profiles,
    rank_n_perturbation,
    strongly_h_finite_sum,
)
from .spectral import (
    LevelSpacingStats,
    MeasureScan,
    QBoundary,
    ScanConfig,
    SpectralResult,
    SupportScanResult,
    TraceGEpsilon,
    default_epsilon_ladder,
    default_theta_grid,
    g_epsilon_matrix,
    g_epsilon_norm,
    level_spacing_stats,
    q_boundary,
    quasi_energies,
    singular_support_scan,
    spectral_density,
    spectral_density_resolvent,
    trace_g_epsilon,
    unitary_eigenphases,
)
from .verify import (
    KernelCheckReport,
    c_scaling,
    delta_eps_closed,
    delta_eps_series,
    denominator,
    fourier_agreement_grid,
    numerator_discrepancy_check,
    numerator_equation,
    numerator_table,
    phi_lambda,
    phi_tilde_analytic,
    phi_tilde_numeric,
    phi_tilde_two_part,
    run_all_checks,
    sign_table_check,
    telescoping_check,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
