"""Numerical toolkit for order-3 generalized q-hypergeometric equations.

Local fundamental solutions at 0 and infinity, Birkhoff and twisted connection
matrices with closed-form determinant/minor oracles, density-theorem generator
sets, and descriptor-level classification of the difference Galois group.
"""

from .context import QContext, TruncationReport
from .errors import (
    QGaloisError,
    DomainError,
    PoleError,
    NonConvergentError,
    DivergenceError,
    IllConditionedError,
    NotUnimodularError,
    BadIndexError,
    ResonantError,
    PoleChainError,
    ExtrapolationDivergedError,
    SpiralCollisionError,
    SingularSolutionError,
    BasePointSingularError,
    InsufficientSamplesError,
    NotQRealError,
)
from .spiral import (
    SpiralPoint,
    SpiralVerdict,
    decompose,
    in_q_spiral,
    log_q,
    g_endomorphism,
    gamma1,
    gamma2,
)
from .qseries import (
    qpochhammer_finite,
    qpochhammer_infinite,
    qpoch_inf_product,
    theta,
    theta_d1,
    theta_d2,
    theta_triple_product,
    qcharacter,
    lq,
    lq_binom,
    phi3_2,
    qhyper_series,
)
from .mat3 import (
    JordanForm,
    DunfordPair,
    eig3,
    dunford,
    rho,
    psl2_relation_residual,
    psl2_eigenvalue_check,
    in_perm_cstar,
    minor2,
)
from .hypersystem import (
    HyperParams,
    SideVerdict,
    SystemVerdicts,
    LocalData,
    system_matrix,
    check_fuchsian_nonresonant,
    local_solution_zero,
    local_solution_infinity,
    local_solution_zero_log,
    local_solution_infinity_log,
    e_matrix,
    extend_solution,
    fmatrix_at,
    solution_matrix,
    gauge_residual,
    ladder_order,
)
from .connection import (
    ConnectionEval,
    pochhammer_coefficient,
    core_closed_form,
    core_numeric,
    birkhoff_numeric,
    birkhoff_closed_form,
    twist_factor,
    twisted_birkhoff,
    det_formula,
    minor_formula,
    connection_logarithmic,
    connection_eval,
)
from .galois import (
    IrreducibilityVerdict,
    GaloisReport,
    irreducibility,
    normalize_parameters,
    classify_case,
    base_point,
    omega_samples,
    generators,
    fit_relation_residual,
    pgl2_obstruction,
    classify,
)
from .verify import CheckResult, run_suite, SUITES

__version__ = "0.1.0"
