"""Disclosure-risk bounds for differentially private releases.

Converts DP, PDP and zCDP guarantees into bounds on a strong adversary's
posterior belief about membership, composes guarantees over many releases,
and plans budgets from risk targets.
"""
from .composition import (
    compose_advanced,
    compose_basic,
    compose_optimal_homogeneous,
    compose_zcdp,
    first_crossing,
    optimal_frontier,
    risk_curve,
)
from .errors import DomainError, InfeasibleError
from .guarantees import (
    PDP,
    ZCDP,
    ApproxDP,
    PureDP,
    diff_bound_to_pdp,
    dp_to_pdp,
    dp_to_pdp_epsilon,
    epsilon_tilde,
    zcdp_to_dp,
    zcdp_to_pdp_optimized,
)
from .mechanisms import DiscreteMechanismPair, a6_counterexample, randomized_response, tight_delta
from .planner import RiskProfile, ReleaseSchedule, max_total_epsilon, per_release_epsilon, worst_case_report
from .risk_bounds import (
    combined_worst_case,
    diff_interval,
    diff_magnitude,
    posterior_interval,
    ratio_interval,
    worst_case_priors_diff,
)

__version__ = "0.1.0"
