"""Turn disclosure-risk requirements into privacy budgets, and report worst-case priors."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

from . import risk_bounds
from ._search import bisect_monotone
from .composition import compose_advanced, optimal_frontier
from .errors import DomainError, InfeasibleError
from .guarantees import dp_to_pdp_epsilon

PROFILE_CRITERIA = ("posterior_upper", "ratio_upper", "diff_magnitude")
DEFAULT_PRIOR_GRID = tuple(i / 1000 for i in range(1, 1000))
_ROUNDOFF = 1e-14


@dataclass(frozen=True)
class RiskProfile:
    criterion: str
    threshold: float
    confidence_delta_prime: float
    prior: Optional[float] = None

    def __post_init__(self):
        if self.criterion not in PROFILE_CRITERIA:
            raise DomainError(f"unknown criterion {self.criterion!r}")
        if not (0.0 < self.confidence_delta_prime < 1.0):
            raise DomainError("delta' must lie in (0, 1)")
        if self.criterion == "posterior_upper" and self.prior is None:
            raise DomainError("a posterior_upper profile needs a prior")
        # validates the threshold range as a side effect
        self.epsilon_prime()

    def epsilon_prime(self) -> float:
        """Largest eps' whose bound meets the threshold."""
        if self.criterion == "diff_magnitude":
            return risk_bounds.epsilon_for_diff(self.threshold)
        if self.criterion == "ratio_upper":
            return risk_bounds.epsilon_for_ratio(self.threshold)
        return risk_bounds.epsilon_for_posterior(self.prior, self.threshold)


@dataclass(frozen=True)
class ReleaseSchedule:
    k: int
    per_release_delta: float
    total_delta: float
    method: str = "basic"

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be a positive integer")
        if not (0.0 <= self.per_release_delta < 1.0 and 0.0 <= self.total_delta < 1.0):
            raise DomainError("deltas must lie in [0, 1)")
        if self.method not in ("basic", "advanced", "optimal"):
            raise DomainError(f"unknown method {self.method!r}")


def pdp_to_dp_epsilon(epsilon_prime: float, delta: float, delta_prime: float) -> float:
    """Largest eps such that (eps, delta)-DP converts to at most eps' at delta'.

    Inverse of the DP-to-PDP map: eps = log(((delta' - delta) e^{eps'} - delta) / delta').
    """
    if not (0.0 <= delta < delta_prime):
        raise DomainError("delta must lie in [0, delta')")
    if delta == 0.0:
        return epsilon_prime
    # the log argument minus one, kept in expm1 form for small eps'
    x = ((delta_prime - delta) * math.expm1(epsilon_prime) - 2.0 * delta) / delta_prime
    if x < -_ROUNDOFF * max(1.0, epsilon_prime):
        raise InfeasibleError(
            f"eps' = {epsilon_prime!r} is unreachable at delta = {delta!r}, delta' = {delta_prime!r}",
            epsilon_prime=epsilon_prime, delta=delta, delta_prime=delta_prime)
    return math.log1p(max(x, 0.0))


def max_total_epsilon(profile: Union[RiskProfile, Sequence[RiskProfile]], total_delta: float) -> float:
    """Largest total eps such that (eps, total_delta)-DP satisfies every profile."""
    profiles = [profile] if isinstance(profile, RiskProfile) else list(profile)
    if not profiles:
        raise DomainError("at least one risk profile is required")
    return min(pdp_to_dp_epsilon(p.epsilon_prime(), total_delta, p.confidence_delta_prime)
               for p in profiles)


def _composition_fits(schedule: ReleaseSchedule, eps: float, epsilon_total: float) -> bool:
    k, d0, dt = schedule.k, schedule.per_release_delta, schedule.total_delta
    if schedule.method == "basic":
        return k * eps <= epsilon_total and k * d0 <= dt
    if schedule.method == "advanced":
        if k * d0 >= dt:
            return False
        if eps == 0.0:
            return True
        return compose_advanced([eps] * k, [d0] * k, dt).epsilon <= epsilon_total
    return any(e <= epsilon_total and d <= dt for e, d in optimal_frontier(eps, d0, k))


def per_release_epsilon(schedule: ReleaseSchedule, epsilon_total: float, tol: float = 1e-13) -> float:
    """Largest per-release eps whose k-fold composition fits (epsilon_total, total_delta).

    Every composed parameter is nondecreasing in the per-release eps, so the
    feasible set is an interval starting at 0 and bisection applies.
    """
    if not (epsilon_total >= 0.0):
        raise DomainError("epsilon_total must be nonnegative")

    def fits(eps: float) -> bool:
        return _composition_fits(schedule, eps, epsilon_total)

    if not fits(0.0):
        raise InfeasibleError(
            "the per-release deltas alone exceed the total delta budget",
            k=schedule.k, per_release_delta=schedule.per_release_delta,
            total_delta=schedule.total_delta, method=schedule.method)
    return bisect_monotone(fits, 0.0, epsilon_total, tol=tol)


@dataclass
class WorstCaseReport:
    parameters: dict
    epsilon_prime: float
    envelope: dict
    worst_priors: dict
    extrema: dict
    selected: List[dict] = field(default_factory=list)
    grid: List[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "parameters": self.parameters,
            "epsilon_prime": self.epsilon_prime,
            "envelope": self.envelope,
            "worst_priors": self.worst_priors,
            "extrema": self.extrema,
            "selected": self.selected,
            "grid": self.grid,
        }


def _prior_row(eps_prime: float, delta_prime: float, p: float) -> dict:
    iv = risk_bounds.posterior_interval(eps_prime, delta_prime, p)
    wc = risk_bounds.combined_worst_case(eps_prime, delta_prime, p)
    return {
        "prior": p,
        "posterior_lower": iv.lower,
        "posterior_upper": iv.upper,
        "ratio_max": wc.ratio_max,
        "diff_max": wc.diff_max,
        "diff_increase": iv.upper - p,
        "diff_decrease": p - iv.lower,
    }


def worst_case_report(epsilon: float, delta: float, delta_prime: float,
                      prior_grid: Sequence[float] = DEFAULT_PRIOR_GRID,
                      extra_priors: Sequence[float] = ()) -> WorstCaseReport:
    """Ratio and difference bounds across priors for an (epsilon, delta)-DP release."""
    eps_prime = dp_to_pdp_epsilon(epsilon, delta, delta_prime)
    grid = [_prior_row(eps_prime, delta_prime, p) for p in prior_grid]
    p_inc, p_dec = risk_bounds.worst_case_priors_diff(eps_prime)
    worst_rows = {"diff_increase_p": p_inc, "diff_decrease_p": p_dec}
    if 0.0 < p_inc < 1.0:
        worst_rows["at_diff_increase_p"] = _prior_row(eps_prime, delta_prime, p_inc)
    extrema = {}
    if grid:
        top_diff = max(grid, key=lambda r: r["diff_max"])
        top_ratio = max(grid, key=lambda r: r["ratio_max"])
        extrema = {
            "diff_max": top_diff["diff_max"], "diff_max_prior": top_diff["prior"],
            "ratio_max": top_ratio["ratio_max"], "ratio_max_prior": top_ratio["prior"],
        }
    return WorstCaseReport(
        parameters={"epsilon": epsilon, "delta": delta, "delta_prime": delta_prime},
        epsilon_prime=eps_prime,
        envelope={"ratio_upper": math.exp(eps_prime),
                  "diff_magnitude": risk_bounds.diff_magnitude(eps_prime),
                  "confidence": 1.0 - delta_prime},
        worst_priors=worst_rows,
        extrema=extrema,
        selected=[_prior_row(eps_prime, delta_prime, p) for p in extra_priors],
        grid=grid,
    )
