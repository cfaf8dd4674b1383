"""Closed-form disclosure-risk bounds for a strong membership-inference adversary.

Every function here takes the PDP parameters (epsilon', delta') directly; use
:mod:`dprisk.guarantees` to reach them from DP or zCDP.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .errors import DomainError


def _check_eps(epsilon_prime: float) -> None:
    if not (epsilon_prime >= 0.0) or math.isinf(epsilon_prime):
        raise DomainError(f"epsilon' must be finite and nonnegative, got {epsilon_prime!r}")


def _check_unit(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class ProbabilityInterval:
    lower: float
    upper: float
    confidence: float = 1.0

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise DomainError(f"invalid interval [{self.lower!r}, {self.upper!r}]")
        _check_unit("confidence", self.confidence)

    def contains(self, x: float, tol: float = 1e-12) -> bool:
        return self.lower - tol <= x <= self.upper + tol


@dataclass(frozen=True)
class SymmetricBound:
    """Prior-independent band on the posterior-to-prior ratio or difference.

    For ``kind == "ratio"`` the magnitude is e^eps' and the band is
    [1/magnitude, magnitude]; for ``kind == "difference"`` it is
    [-magnitude, magnitude].
    """
    magnitude: float
    kind: str
    confidence: float = 1.0

    def __post_init__(self):
        if self.kind == "ratio":
            if not self.magnitude >= 1.0:
                raise DomainError("ratio magnitude must be >= 1")
        elif self.kind == "difference":
            if not (0.0 <= self.magnitude < 1.0):
                raise DomainError("difference magnitude must lie in [0, 1)")
        else:
            raise DomainError(f"unknown bound kind {self.kind!r}")
        _check_unit("confidence", self.confidence)

    @property
    def lower(self) -> float:
        return 1.0 / self.magnitude if self.kind == "ratio" else -self.magnitude

    @property
    def upper(self) -> float:
        return self.magnitude if self.kind == "ratio" else self.magnitude

    def posterior_interval(self, prior: float) -> ProbabilityInterval:
        """The band expressed as an interval on the posterior for a given prior."""
        _check_unit("prior", prior)
        if self.kind == "ratio":
            lo, hi = prior / self.magnitude, prior * self.magnitude
        else:
            lo, hi = prior - self.magnitude, prior + self.magnitude
        return ProbabilityInterval(max(0.0, lo), min(1.0, hi), self.confidence)


@dataclass(frozen=True)
class WorstCase:
    ratio_max: float
    diff_max: float
    confidence: float


def _posterior_lower(eps: float, p: float) -> float:
    # p / (p + (1 - p) e^eps) == p / (1 + (1 - p) expm1(eps))
    return p / (1.0 + (1.0 - p) * math.expm1(eps))


def _posterior_upper(eps: float, p: float) -> float:
    return p / (1.0 + (1.0 - p) * math.expm1(-eps))


def posterior_interval(epsilon_prime: float, delta_prime: float, prior: float) -> ProbabilityInterval:
    """Interval holding the adversary's posterior with probability >= 1 - delta'."""
    _check_eps(epsilon_prime)
    _check_unit("delta'", delta_prime)
    _check_unit("prior", prior)
    lo = _posterior_lower(epsilon_prime, prior)
    hi = _posterior_upper(epsilon_prime, prior)
    # rounding can push the endpoints a hair past the prior or past [0, 1]
    lo = min(max(lo, 0.0), prior)
    hi = max(min(hi, 1.0), prior)
    return ProbabilityInterval(lo, hi, 1.0 - delta_prime)


def ratio_interval(epsilon_prime: float, delta_prime: float) -> SymmetricBound:
    """Posterior-to-prior ratio band [e^-eps', e^eps']."""
    _check_eps(epsilon_prime)
    _check_unit("delta'", delta_prime)
    return SymmetricBound(math.exp(epsilon_prime), "ratio", 1.0 - delta_prime)


def diff_magnitude(epsilon_prime: float) -> float:
    """(e^{eps/2} - 1) / (e^{eps/2} + 1), i.e. tanh(eps/4)."""
    _check_eps(epsilon_prime)
    return math.tanh(epsilon_prime / 4.0)


def diff_interval(epsilon_prime: float, delta_prime: float) -> SymmetricBound:
    """Posterior-to-prior difference band, valid for every prior."""
    _check_unit("delta'", delta_prime)
    return SymmetricBound(diff_magnitude(epsilon_prime), "difference", 1.0 - delta_prime)


def worst_case_priors_diff(epsilon_prime: float) -> Tuple[float, float]:
    """Priors attaining the largest increase and the largest decrease of the posterior.

    Returns ``(1 / (1 + e^{eps/2}), 1 / (1 + e^{-eps/2}))``.
    """
    _check_eps(epsilon_prime)
    h = epsilon_prime / 2.0
    return 1.0 / (1.0 + math.exp(h)), 1.0 / (1.0 + math.exp(-h))


def epsilon_for_diff(d: float) -> float:
    """Inverse of :func:`diff_magnitude`: 2 log((1 + d) / (1 - d))."""
    if not (0.0 < d < 1.0):
        raise DomainError(f"difference bound must lie in (0, 1), got {d!r}")
    return 4.0 * math.atanh(d)


def epsilon_for_ratio(r: float) -> float:
    """Inverse of the ratio band: log r."""
    if not (r > 1.0) or math.isinf(r):
        raise DomainError(f"ratio bound must be a finite number > 1, got {r!r}")
    return math.log(r)


def epsilon_for_posterior(prior: float, upper: float) -> float:
    """The eps' whose posterior upper bound at ``prior`` equals ``upper``."""
    if not (0.0 < prior < 1.0):
        raise DomainError(f"prior must lie in (0, 1), got {prior!r}")
    if not (prior < upper < 1.0):
        raise DomainError(f"posterior bound must lie in (prior, 1) = ({prior!r}, 1), got {upper!r}")
    # logit(upper) - logit(prior)
    return (math.log(upper) - math.log1p(-upper)) - (math.log(prior) - math.log1p(-prior))


def combined_worst_case(epsilon_prime: float, delta_prime: float, prior: float) -> WorstCase:
    """Largest ratio and difference over membership and non-membership orientations.

    The ratio takes max{X/p, (1-X)/(1-p)} at its upper bound; the difference
    takes max{X - p, p - X} over the posterior interval.
    """
    if not (0.0 < prior < 1.0):
        raise DomainError(f"prior must lie in (0, 1) for ratio bounds, got {prior!r}")
    iv = posterior_interval(epsilon_prime, delta_prime, prior)
    member = 1.0 / (1.0 + (1.0 - prior) * math.expm1(-epsilon_prime))
    non_member = 1.0 / (1.0 + prior * math.expm1(-epsilon_prime))
    diff_max = max(iv.upper - prior, prior - iv.lower)
    return WorstCase(max(member, non_member), diff_max, iv.confidence)
