"""Privacy guarantees and the conversions between guarantee families.

All logarithms are natural; epsilon is measured in nats.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from ._search import minimize_over_slack
from .errors import DomainError

LN3_TIMES_2 = 2.0 * math.log(3.0)


def _check_epsilon(epsilon: float) -> None:
    if not (epsilon >= 0.0) or math.isinf(epsilon):
        raise DomainError(f"epsilon must be a finite nonnegative number, got {epsilon!r}")


def _check_delta(delta: float) -> None:
    if not (0.0 <= delta < 1.0):
        raise DomainError(f"delta must lie in [0, 1), got {delta!r}")


@dataclass(frozen=True)
class PureDP:
    epsilon: float

    def __post_init__(self):
        _check_epsilon(self.epsilon)

    @property
    def delta(self) -> float:
        return 0.0


@dataclass(frozen=True)
class ApproxDP:
    epsilon: float
    delta: float = 0.0

    def __post_init__(self):
        _check_epsilon(self.epsilon)
        _check_delta(self.delta)


@dataclass(frozen=True)
class PDP:
    """Probabilistic DP: the privacy loss lies in [-epsilon, epsilon] w.p. >= 1 - delta.

    delta = 1 is accepted (a vacuous statement) because the DP-to-PDP curve is
    defined up to and including delta' = 1.
    """
    epsilon: float
    delta: float = 0.0

    def __post_init__(self):
        _check_epsilon(self.epsilon)
        if not (0.0 <= self.delta <= 1.0):
            raise DomainError(f"delta must lie in [0, 1], got {self.delta!r}")


@dataclass(frozen=True)
class ZCDP:
    rho: float

    def __post_init__(self):
        if not (self.rho > 0.0) or math.isinf(self.rho):
            raise DomainError(f"rho must be a finite positive number, got {self.rho!r}")


PrivacyGuarantee = Union[PureDP, ApproxDP, PDP, ZCDP]

_TYPE_NAMES = {PureDP: "pure_dp", ApproxDP: "approx_dp", PDP: "pdp", ZCDP: "zcdp"}


def as_approx_dp(g: PrivacyGuarantee) -> ApproxDP:
    """View a pure, approximate or probabilistic guarantee as (epsilon, delta)-DP.

    PureDP(e), ApproxDP(e, 0) and PDP(e, 0) all map to ApproxDP(e, 0). A PDP
    guarantee maps through :func:`pdp_to_dp`. zCDP needs a delta and is rejected.
    """
    if isinstance(g, ApproxDP):
        return g
    if isinstance(g, PureDP):
        return ApproxDP(g.epsilon, 0.0)
    if isinstance(g, PDP):
        return pdp_to_dp(g)
    raise DomainError("zCDP has no single (epsilon, delta) form; use zcdp_to_dp")


def pdp_to_dp(g: PDP) -> ApproxDP:
    """(epsilon, delta)-PDP implies (epsilon, delta)-DP with the same parameters."""
    if not isinstance(g, PDP):
        raise DomainError("pdp_to_dp expects a PDP guarantee")
    return ApproxDP(g.epsilon, g.delta)


def zcdp_to_dp(rho: float, delta: float) -> ApproxDP:
    """rho-zCDP implies (rho + 2 sqrt(rho log(1/delta)), delta)-DP."""
    if not (rho > 0.0):
        raise DomainError(f"rho must be positive, got {rho!r}")
    if not (0.0 < delta < 1.0):
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    return ApproxDP(rho + 2.0 * math.sqrt(rho * -math.log(delta)), delta)


def dp_to_pdp_epsilon(epsilon: float, delta: float, delta_prime: float) -> float:
    """epsilon' = log(delta' e^eps + delta) - log(delta' - delta).

    Evaluated as ``eps + log1p(delta (1 + e^-eps) / (delta' - delta))`` which is
    algebraically identical and keeps full precision when delta << delta'.
    """
    _check_epsilon(epsilon)
    _check_delta(delta)
    if not (delta < delta_prime <= 1.0):
        raise DomainError(
            f"delta_prime must lie in (delta, 1] = ({delta!r}, 1], got {delta_prime!r}")
    if delta == 0.0:
        return float(epsilon)
    return epsilon + math.log1p(delta * (1.0 + math.exp(-epsilon)) / (delta_prime - delta))


def dp_to_pdp(epsilon: float, delta: float, delta_prime: float) -> PDP:
    """(epsilon, delta)-DP implies (epsilon', delta')-PDP for every delta' in (delta, 1]."""
    return PDP(dp_to_pdp_epsilon(epsilon, delta, delta_prime), delta_prime)


def dp_to_pdp_curve(epsilon: float, delta: float, delta_primes) -> list:
    """Pointwise :func:`dp_to_pdp_epsilon` over a grid; returns ``[(delta', eps'), ...]``."""
    return [(float(dp), dp_to_pdp_epsilon(epsilon, delta, dp)) for dp in delta_primes]


def epsilon_tilde(epsilon: float) -> Optional[float]:
    """log(3 e^{eps/2} - 1) - log(3 - e^{eps/2}); None when eps >= 2 log 3."""
    _check_epsilon(epsilon)
    h = math.exp(epsilon / 2.0)
    if 3.0 - h <= 0.0:
        return None
    # 3h - 1 = 2 + 3 expm1(eps/2), 3 - h = 2 - expm1(eps/2)
    m = math.expm1(epsilon / 2.0)
    return math.log1p(1.5 * m) - math.log1p(-0.5 * m)


def diff_bound_to_pdp(epsilon: float, delta: float) -> Tuple[PDP, Optional[PDP]]:
    """Guarantees implied by a posterior-to-prior difference bound at (epsilon, delta).

    Returns ``(PDP(eps, 2 delta), PDP(eps_tilde, delta))``; the second entry is
    None when eps >= 2 log 3, where eps_tilde is undefined.
    """
    _check_epsilon(epsilon)
    _check_delta(delta)
    first = PDP(epsilon, min(2.0 * delta, 1.0))
    et = epsilon_tilde(epsilon)
    return first, (PDP(et, delta) if et is not None else None)


def zcdp_to_pdp_optimized(rho: float, delta_prime: float) -> Tuple[PDP, ApproxDP]:
    """Best PDP guarantee reachable from rho-zCDP through an intermediate (eps, delta)-DP.

    Minimizes epsilon' over the intermediate delta in (0, delta'). Returns the
    PDP guarantee and the intermediate DP guarantee that achieved it.
    """
    if not (rho > 0.0):
        raise DomainError(f"rho must be positive, got {rho!r}")
    if not (0.0 < delta_prime < 1.0):
        raise DomainError(f"delta_prime must lie in (0, 1), got {delta_prime!r}")

    def objective(d: float) -> float:
        if not (0.0 < d < delta_prime):
            return math.inf
        return dp_to_pdp_epsilon(zcdp_to_dp(rho, d).epsilon, d, delta_prime)

    d_best, eps_best = minimize_over_slack(objective, delta_prime)
    return PDP(eps_best, delta_prime), zcdp_to_dp(rho, d_best)


# ---- serialization -------------------------------------------------------

def guarantee_to_dict(g: PrivacyGuarantee) -> Dict[str, Union[str, float]]:
    out: Dict[str, Union[str, float]] = {"type": _TYPE_NAMES[type(g)]}
    if isinstance(g, ZCDP):
        out["rho"] = float(g.rho)
    else:
        out["epsilon"] = float(g.epsilon)
        if not isinstance(g, PureDP):
            out["delta"] = float(g.delta)
    return out


def guarantee_from_dict(data: Dict) -> PrivacyGuarantee:
    kind = data.get("type")
    try:
        if kind == "pure_dp":
            return PureDP(float(data["epsilon"]))
        if kind == "approx_dp":
            return ApproxDP(float(data["epsilon"]), float(data.get("delta", 0.0)))
        if kind == "pdp":
            return PDP(float(data["epsilon"]), float(data.get("delta", 0.0)))
        if kind == "zcdp":
            return ZCDP(float(data["rho"]))
    except KeyError as exc:
        raise DomainError(f"guarantee of type {kind!r} is missing field {exc}") from None
    raise DomainError(f"unknown guarantee type {kind!r}")


def dumps_guarantee(g: PrivacyGuarantee) -> str:
    return json.dumps(guarantee_to_dict(g), sort_keys=True)


def loads_guarantee(text: str) -> PrivacyGuarantee:
    return guarantee_from_dict(json.loads(text))
