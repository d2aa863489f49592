"""Game-theoretic analysis of classifier deployment under adaptive attack."""

from .core import (
    DEFAULT_EPS,
    STRATEGY_SUM_TOL,
    AttackAction,
    DimensionError,
    EconomicParams,
    GameSpec,
    ModelProfile,
    Strategy,
    ValidationReport,
    asr,
    asr_mixed,
    ccr,
    ccr_mixed,
    check_ordering_2x2,
    no_attack_action,
    validate_spec,
)
from .payoff import (
    EppsVector,
    PayoffMatrices,
    delta_mu_def,
    epps_adv,
    epps_adv_pure,
    epps_def,
    epps_def_pure,
    mu_adv,
    mu_def,
    payoff_matrices,
    utility_adv,
    utility_def,
)
from .analytic import (
    AdversaryCase,
    BestResponseSet,
    DefenderCase,
    MixedEquilibrium2x2,
    OrderingError,
    adversary_case,
    adversary_preconditions,
    best_response_adv,
    best_response_def,
    ccr_intersection,
    defend_threshold,
    defender_case,
    defender_preconditions,
    delta_acc,
    delta_ccr,
    delta_rob,
    mixed_nash_2x2,
)
from .solver import (
    ActionDominance,
    DominanceReport,
    EliminationResult,
    EnvelopeBreakpoint,
    EnvelopeSegment,
    EnvelopeSegments,
    EquilibriumCertificate,
    EquilibriumResult,
    GridProfile,
    SolverGuardError,
    dominance_report,
    grid_equilibrium_scan,
    iterated_elimination,
    pure_equilibria,
    simplex_grid,
    support_enumeration,
    upper_envelope_ccr,
    verify_equilibrium,
)
from .simulate import ConvergenceReport, SimConfig, SimResult, convergence_check, simulate
from .config import (
    ConfigError,
    SpecValidationError,
    bundled_config_path,
    load_spec,
    spec_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AttackAction",
    "ActionDominance",
    "AdversaryCase",
    "BestResponseSet",
    "ConfigError",
    "ConvergenceReport",
    "DEFAULT_EPS",
    "DefenderCase",
    "DimensionError",
    "DominanceReport",
    "EconomicParams",
    "EliminationResult",
    "EnvelopeBreakpoint",
    "EnvelopeSegment",
    "EnvelopeSegments",
    "EppsVector",
    "EquilibriumCertificate",
    "EquilibriumResult",
    "GameSpec",
    "GridProfile",
    "MixedEquilibrium2x2",
    "ModelProfile",
    "OrderingError",
    "PayoffMatrices",
    "SimConfig",
    "SimResult",
    "SolverGuardError",
    "SpecValidationError",
    "Strategy",
    "STRATEGY_SUM_TOL",
    "ValidationReport",
    "adversary_case",
    "adversary_preconditions",
    "asr",
    "asr_mixed",
    "best_response_adv",
    "best_response_def",
    "bundled_config_path",
    "ccr",
    "ccr_intersection",
    "ccr_mixed",
    "check_ordering_2x2",
    "convergence_check",
    "defend_threshold",
    "defender_case",
    "defender_preconditions",
    "delta_acc",
    "delta_ccr",
    "delta_mu_def",
    "delta_rob",
    "dominance_report",
    "epps_adv",
    "epps_adv_pure",
    "epps_def",
    "epps_def_pure",
    "grid_equilibrium_scan",
    "iterated_elimination",
    "load_spec",
    "mixed_nash_2x2",
    "mu_adv",
    "mu_def",
    "no_attack_action",
    "payoff_matrices",
    "pure_equilibria",
    "simplex_grid",
    "simulate",
    "spec_from_dict",
    "support_enumeration",
    "upper_envelope_ccr",
    "utility_adv",
    "utility_def",
    "validate_spec",
    "verify_equilibrium",
]
