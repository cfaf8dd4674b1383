"""Composition theorems and disclosure-risk-versus-release-count curves."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp

from . import risk_bounds
from ._search import minimize_over_slack
from .errors import DomainError
from .guarantees import (
    ZCDP,
    ApproxDP,
    PrivacyGuarantee,
    as_approx_dp,
    dp_to_pdp_epsilon,
    zcdp_to_pdp_optimized,
)

METHODS = ("basic", "advanced", "optimal", "zcdp")
CRITERIA = ("posterior_upper", "diff_magnitude", "ratio_upper")


def compose_basic(guarantees: Sequence[ApproxDP]) -> ApproxDP:
    if not guarantees:
        raise DomainError("cannot compose an empty list")
    gs = [as_approx_dp(g) for g in guarantees]
    return ApproxDP(math.fsum(g.epsilon for g in gs), math.fsum(g.delta for g in gs))


def compose_advanced(epsilons: Sequence[float], deltas: Sequence[float], total_delta: float) -> ApproxDP:
    """Advanced composition at a chosen total delta > sum(deltas)."""
    if len(epsilons) == 0 or len(epsilons) != len(deltas):
        raise DomainError("epsilons and deltas must be nonempty and of equal length")
    slack = total_delta - math.fsum(deltas)
    if not slack > 0.0:
        raise DomainError(f"total_delta must exceed sum of deltas ({math.fsum(deltas)!r})")
    if total_delta >= 1.0:
        raise DomainError("total_delta must be < 1")
    linear = math.fsum(e * math.expm1(e) for e in epsilons)
    quad = math.fsum(e * e for e in epsilons)
    return ApproxDP(linear + math.sqrt(2.0 * quad * -math.log(slack)), total_delta)


def _log_binomials(k: int) -> np.ndarray:
    j = np.arange(k + 1, dtype=float)
    return gammaln(k + 1.0) - gammaln(j + 1.0) - gammaln(k - j + 1.0)


def log_delta_ell(eps_0: float, k: int, ell: int, _logc: Optional[np.ndarray] = None) -> float:
    """log of delta_ell in the homogeneous optimal composition theorem.

    delta_ell = sum_{j<ell} C(k,j) (e^{(k-j)eps} - e^{(k-2ell+j)eps}) / (1+e^eps)^k.
    Each bracket is rewritten as e^{(k-j)eps} (1 - e^{-2(ell-j)eps}) so the sum
    is a log-sum-exp of finite terms. Returns -inf for the empty sum.
    """
    if ell <= 0 or eps_0 == 0.0:
        return -math.inf
    logc = _log_binomials(k) if _logc is None else _logc
    j = np.arange(ell, dtype=float)
    terms = (logc[:ell] + (k - j) * eps_0
             + np.log(-np.expm1(-2.0 * (ell - j) * eps_0))
             - k * np.logaddexp(0.0, eps_0))
    return float(logsumexp(terms))


def delta_ell_direct(eps_0: float, k: int, ell: int) -> float:
    """Plain floating-point delta_ell; overflows for large k (reference only)."""
    num = math.fsum(math.comb(k, j) * (math.exp((k - j) * eps_0) - math.exp((k - 2 * ell + j) * eps_0))
                    for j in range(ell))
    return num / (1.0 + math.exp(eps_0)) ** k


def _total_delta(delta_0: float, k: int, log_dl: float) -> float:
    # 1 - (1 - delta_0)^k (1 - delta_ell)
    if log_dl >= 0.0:
        return 1.0
    log_keep = k * math.log1p(-delta_0) + (math.log1p(-math.exp(log_dl)) if log_dl > -math.inf else 0.0)
    return -math.expm1(log_keep)


def compose_optimal_homogeneous(eps_0: float, delta_0: float, k: int, ell: int) -> ApproxDP:
    """One point of the optimal composition frontier for k copies of (eps_0, delta_0)-DP."""
    if k < 1:
        raise DomainError("k must be a positive integer")
    if not (0 <= ell <= k // 2):
        raise DomainError(f"ell must lie in [0, {k // 2}], got {ell}")
    base = ApproxDP(eps_0, delta_0)
    return ApproxDP((k - 2 * ell) * base.epsilon,
                    _total_delta(base.delta, k, log_delta_ell(base.epsilon, k, ell)))


def optimal_frontier(eps_0: float, delta_0: float, k: int) -> List[Tuple[float, float]]:
    """All (epsilon, delta) points for ell = 0 .. floor(k/2)."""
    if k < 1:
        raise DomainError("k must be a positive integer")
    base = ApproxDP(eps_0, delta_0)
    logc = _log_binomials(k)
    return [((k - 2 * ell) * base.epsilon,
             _total_delta(base.delta, k, log_delta_ell(base.epsilon, k, ell, logc)))
            for ell in range(k // 2 + 1)]


def select_frontier_point(eps_0: float, delta_0: float, k: int, target_delta: float) -> Tuple[int, ApproxDP]:
    """Smallest-epsilon frontier point with delta <= target_delta (ties to smaller ell)."""
    best = None
    for ell, (e, d) in enumerate(optimal_frontier(eps_0, delta_0, k)):
        if d <= target_delta and (best is None or e < best[1].epsilon):
            best = (ell, ApproxDP(e, d))
    if best is None:
        raise DomainError(f"no frontier point meets delta <= {target_delta!r}")
    return best


def compose_zcdp(rhos: Sequence[float]) -> ZCDP:
    if len(rhos) == 0:
        raise DomainError("cannot compose an empty list")
    return ZCDP(math.fsum(rhos))


# ---- risk curves ---------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    k: int
    epsilon_total: float
    delta_total: float
    epsilon_prime: float
    criterion_value: float


def criterion_value(criterion: str, epsilon_prime: float, prior: Optional[float] = None) -> float:
    if criterion == "posterior_upper":
        if prior is None:
            raise DomainError("posterior_upper needs a prior")
        return risk_bounds.posterior_interval(epsilon_prime, 0.0, prior).upper
    if criterion == "diff_magnitude":
        return risk_bounds.diff_magnitude(epsilon_prime)
    if criterion == "ratio_upper":
        return math.exp(epsilon_prime)
    raise DomainError(f"unknown criterion {criterion!r}")


def best_pdp_after_composition(per_release: PrivacyGuarantee, method: str, k: int,
                               delta_prime: float) -> Tuple[ApproxDP, float]:
    """Compose k releases and convert to PDP at delta', choosing the composition
    delta that minimizes epsilon'.

    Returns the composed DP guarantee used and the resulting epsilon'.
    """
    if k < 1:
        raise DomainError("k must be a positive integer")
    if not (0.0 < delta_prime < 1.0):
        raise DomainError(f"delta' must lie in (0, 1), got {delta_prime!r}")
    if method == "zcdp":
        if not isinstance(per_release, ZCDP):
            raise DomainError("method 'zcdp' needs a zCDP per-release guarantee")
        pdp, dp = zcdp_to_pdp_optimized(k * per_release.rho, delta_prime)
        return dp, pdp.epsilon
    if isinstance(per_release, ZCDP):
        raise DomainError("a zCDP per-release guarantee composes only with method 'zcdp'")
    g = as_approx_dp(per_release)

    if method == "basic":
        total = compose_basic([g] * k)
        return total, dp_to_pdp_epsilon(total.epsilon, total.delta, delta_prime)

    if method == "advanced":
        floor = k * g.delta
        span = delta_prime - floor
        if not span > 0.0:
            raise DomainError("composed deltas already exceed delta'")
        eps_list, del_list = [g.epsilon] * k, [g.delta] * k

        def objective(s: float) -> float:
            if not floor + s > floor:
                return math.inf  # slack lost below the resolution of floor
            try:
                total = compose_advanced(eps_list, del_list, floor + s)
            except DomainError:
                return math.inf
            return dp_to_pdp_epsilon(total.epsilon, total.delta, delta_prime)

        s_best, eps_best = minimize_over_slack(objective, span)
        return compose_advanced(eps_list, del_list, floor + s_best), eps_best

    if method == "optimal":
        best = None
        for e, d in optimal_frontier(g.epsilon, g.delta, k):
            if d >= delta_prime:
                continue
            ep = dp_to_pdp_epsilon(e, d, delta_prime)
            if best is None or ep < best[1]:
                best = (ApproxDP(e, d), ep)
        if best is None:
            raise DomainError("every optimal-composition point has delta >= delta'")
        return best

    raise DomainError(f"unknown composition method {method!r}")


def risk_curve(per_release: PrivacyGuarantee, method: str, k_max: int, delta_prime: float,
               criterion: str = "posterior_upper", prior: Optional[float] = None,
               k_min: int = 1) -> List[CurvePoint]:
    """Disclosure-risk bound after k = k_min .. k_max releases."""
    if criterion not in CRITERIA:
        raise DomainError(f"unknown criterion {criterion!r}")
    if criterion == "posterior_upper" and prior is None:
        raise DomainError("posterior_upper needs a prior")
    points = []
    for k in range(k_min, k_max + 1):
        dp, eps_prime = best_pdp_after_composition(per_release, method, k, delta_prime)
        points.append(CurvePoint(k, dp.epsilon, dp.delta, eps_prime,
                                 criterion_value(criterion, eps_prime, prior)))
    return points


def first_crossing(points: Sequence[CurvePoint], threshold: float) -> Optional[int]:
    """First k whose criterion value strictly exceeds ``threshold``."""
    for pt in points:
        if pt.criterion_value > threshold:
            return pt.k
    return None
