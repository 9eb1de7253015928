"""Optimal mediators for the extended El Farol game."""

from .analytic import (
    EquilibriumReport,
    Family,
    MediatorReport,
    NashRegime,
    NashReport,
    analyze,
    best_mediator,
    best_nash,
    enforcement_value,
    lambda_candidate,
    make_family,
    mediation_value,
    optimal_fraction,
    optimal_social_cost,
)
from .game import (
    ConfigDistribution,
    Configuration,
    DomainError,
    GameParams,
    InvalidDistributionError,
    ParameterError,
    RawGameParams,
    Sign,
    config_social_cost,
    cost_to_go,
    delta,
    expected_social_cost,
    normalize,
    sign_classify,
    validate_distribution,
)

__version__ = "0.1.0"
