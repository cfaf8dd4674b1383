"""Finite mechanism pairs and exact brute-force oracles.

A :class:`DiscreteMechanismPair` holds the output distribution of a mechanism
on a database with the target (``prob_with``) and without it
(``prob_without``). Everything here is exact enumeration over the outcomes, so
it serves as an independent check on the closed-form bounds.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .errors import DomainError
from .guarantees import epsilon_tilde
from .risk_bounds import ProbabilityInterval

WORLDS = ("with", "without")
MAX_OUTCOMES = 10**6
_SUM_TOL = 1e-12
_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteMechanismPair:
    outcomes: Tuple
    prob_with: Tuple[float, ...]
    prob_without: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "prob_with", tuple(float(x) for x in self.prob_with))
        object.__setattr__(self, "prob_without", tuple(float(x) for x in self.prob_without))
        n = len(self.outcomes)
        if n == 0 or len(self.prob_with) != n or len(self.prob_without) != n:
            raise DomainError("outcomes and both probability vectors must have the same nonzero length")
        if len(set(self.outcomes)) != n:
            raise DomainError("outcome labels must be unique")
        for name, vec in (("prob_with", self.prob_with), ("prob_without", self.prob_without)):
            if any(not (x >= 0.0) for x in vec):
                raise DomainError(f"{name} has a negative or NaN entry")
            if abs(math.fsum(vec) - 1.0) > _SUM_TOL:
                raise DomainError(f"{name} sums to {math.fsum(vec)!r}, not 1")

    def swapped(self) -> "DiscreteMechanismPair":
        return DiscreteMechanismPair(self.outcomes, self.prob_without, self.prob_with)

    def to_dict(self) -> dict:
        return {"outcomes": list(self.outcomes), "prob_with": list(self.prob_with),
                "prob_without": list(self.prob_without)}

    @classmethod
    def from_dict(cls, data: dict) -> "DiscreteMechanismPair":
        try:
            outcomes = [tuple(o) if isinstance(o, list) else o for o in data["outcomes"]]
            return cls(tuple(outcomes), data["prob_with"], data["prob_without"])
        except KeyError as exc:
            raise DomainError(f"mechanism pair is missing field {exc}") from None


def dumps_pair(pair: DiscreteMechanismPair) -> str:
    return json.dumps(pair.to_dict())


def loads_pair(text: str) -> DiscreteMechanismPair:
    return DiscreteMechanismPair.from_dict(json.loads(text))


@dataclass(frozen=True)
class PLRVDistribution:
    atoms: Tuple[Tuple[float, float], ...]
    world: str


@dataclass(frozen=True)
class PosteriorDistribution:
    atoms: Tuple[Tuple[float, float], ...]
    prior: float
    world: str


def _check_world(world: str) -> None:
    if world not in WORLDS:
        raise DomainError(f"world must be one of {WORLDS}, got {world!r}")


def _log_ratio(p: float, q: float) -> float:
    if q == 0.0:
        return math.inf
    if p == 0.0:
        return -math.inf
    return math.log(p) - math.log(q)


def plrv(pair: DiscreteMechanismPair, world: str = "with") -> PLRVDistribution:
    """Privacy loss log(P(y)/Q(y)) for y drawn from the sampling world.

    For ``world="with"`` this is PrivLoss(M(x) || M(x_-i)); for ``"without"``
    the roles swap. Outcomes without sampling mass are dropped.
    """
    _check_world(world)
    p, q = (pair.prob_with, pair.prob_without) if world == "with" else (pair.prob_without, pair.prob_with)
    atoms = tuple((_log_ratio(pi, qi), pi) for pi, qi in zip(p, q) if pi > 0.0)
    return PLRVDistribution(atoms, world)


def _posterior_from_loss(prior: float, z: float, world: str) -> float:
    # with: p / (p + (1-p) e^{-Z});  without: p / (p + (1-p) e^{Z'})
    if prior == 0.0:
        return 0.0
    if prior == 1.0:
        return 1.0
    s = -z if world == "with" else z
    if s == math.inf:
        return 0.0
    if s == -math.inf:
        return 1.0
    return prior / (prior + (1.0 - prior) * math.exp(s))


def posterior_distribution(pair: DiscreteMechanismPair, prior: float, world: str = "with") -> PosteriorDistribution:
    """Distribution of the strong adversary's posterior, via the privacy loss."""
    if not (0.0 <= prior <= 1.0):
        raise DomainError(f"prior must lie in [0, 1], got {prior!r}")
    dist = plrv(pair, world)
    atoms = tuple((_posterior_from_loss(prior, z, world), m) for z, m in dist.atoms)
    return PosteriorDistribution(atoms, prior, world)


def posterior_bayes(pair: DiscreteMechanismPair, prior: float, world: str = "with") -> PosteriorDistribution:
    """Same distribution as :func:`posterior_distribution`, computed by Bayes' rule per outcome."""
    _check_world(world)
    sample = pair.prob_with if world == "with" else pair.prob_without
    atoms = []
    for pw, po, m in zip(pair.prob_with, pair.prob_without, sample):
        if m <= 0.0:
            continue
        num = prior * pw
        den = num + (1.0 - prior) * po
        atoms.append((num / den if den > 0.0 else prior, m))
    return PosteriorDistribution(tuple(atoms), prior, world)


def violation_probability(pair: DiscreteMechanismPair, prior: float,
                          interval: ProbabilityInterval, world: str = "with") -> float:
    """Exact mass of posterior atoms strictly outside the closed interval."""
    post = posterior_distribution(pair, prior, world)
    return math.fsum(m for x, m in post.atoms if not interval.contains(x, _BOUNDARY_TOL))


def _tight_delta_one_way(p: Sequence[float], q: Sequence[float], epsilon: float) -> float:
    # E_P[max(0, 1 - e^{eps - Z})] = sum_y max(0, P(y) - e^eps Q(y))
    e = math.exp(epsilon)
    return math.fsum(max(0.0, pi - e * qi) for pi, qi in zip(p, q))


def tight_delta(pair: DiscreteMechanismPair, epsilon: float) -> float:
    """Smallest delta for which the pair is (epsilon, delta)-DP, over both neighbour orders."""
    if not (epsilon >= 0.0):
        raise DomainError(f"epsilon must be nonnegative, got {epsilon!r}")
    return max(_tight_delta_one_way(pair.prob_with, pair.prob_without, epsilon),
               _tight_delta_one_way(pair.prob_without, pair.prob_with, epsilon))


def tight_delta_tail_form(pair: DiscreteMechanismPair, epsilon: float) -> float:
    """Tight delta as P[Z > eps] - e^eps P[-Z' > eps], evaluated from the two
    privacy-loss distributions rather than from the probability vectors."""
    if not (epsilon >= 0.0):
        raise DomainError(f"epsilon must be nonnegative, got {epsilon!r}")
    e = math.exp(epsilon)
    out = []
    for first, second in (("with", "without"), ("without", "with")):
        z = plrv(pair, first).atoms
        z_rev = plrv(pair, second).atoms
        tail = math.fsum(m for v, m in z if v > epsilon)
        rev_tail = math.fsum(m for v, m in z_rev if -v > epsilon)
        out.append(max(0.0, tail - e * rev_tail))
    return max(out)


def privacy_loss_tail(pair: DiscreteMechanismPair, epsilon: float, world: str = "with") -> float:
    """P[|Z| > eps] in one sampling world."""
    tol = _BOUNDARY_TOL * max(1.0, epsilon)
    return math.fsum(m for z, m in plrv(pair, world).atoms if abs(z) > epsilon + tol)


def pdp_holds(pair: DiscreteMechanismPair, epsilon: float, delta: float) -> bool:
    """Whether |privacy loss| <= eps with probability >= 1 - delta in both orders."""
    return all(privacy_loss_tail(pair, epsilon, w) <= delta + _BOUNDARY_TOL for w in WORLDS)


def randomized_response(epsilon: float) -> DiscreteMechanismPair:
    """Binary randomized response: answers truthfully with probability e^eps / (1 + e^eps)."""
    if not (epsilon > 0.0):
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    hi = 1.0 / (1.0 + math.exp(-epsilon))
    lo = 1.0 / (1.0 + math.exp(epsilon))
    return DiscreteMechanismPair(("yes", "no"), (hi, lo), (lo, hi))


def a6_counterexample(epsilon: float, delta: float) -> DiscreteMechanismPair:
    """Randomized response at eps_tilde, run with probability delta (1 + e^{-eps_tilde});
    otherwise the mechanism releases nothing.

    It bounds the posterior-to-prior difference at (eps, delta) yet is not
    (eps, delta)-PDP.
    """
    if not (epsilon > 0.0):
        raise DomainError("epsilon must be positive")
    et = epsilon_tilde(epsilon)
    if et is None:
        raise DomainError("epsilon must be below 2 log 3")
    run = delta * (1.0 + math.exp(-et))
    if not (0.0 < run <= 1.0):
        raise DomainError("delta too large: delta (1 + e^-eps_tilde) must be <= 1")
    rr = randomized_response(et)
    nothing = 1.0 - run
    return DiscreteMechanismPair(
        ("yes", "no", "nothing"),
        (run * rr.prob_with[0], run * rr.prob_with[1], nothing),
        (run * rr.prob_without[0], run * rr.prob_without[1], nothing),
    )


def _collapse_identical(pair: DiscreteMechanismPair, k: int) -> DiscreteMechanismPair:
    # k independent copies of one pair: the multiset of outcomes is sufficient
    m = len(pair.outcomes)
    log_fact = [math.lgamma(i + 1) for i in range(k + 1)]
    labels: List[Tuple[int, ...]] = []
    pw: List[float] = []
    po: List[float] = []
    for counts in _compositions(k, m):
        log_mult = log_fact[k] - math.fsum(log_fact[c] for c in counts)
        labels.append(counts)
        pw.append(_multinomial_mass(log_mult, counts, pair.prob_with))
        po.append(_multinomial_mass(log_mult, counts, pair.prob_without))
    return DiscreteMechanismPair(tuple(labels), _renormalize(pw), _renormalize(po))


def _multinomial_mass(log_mult: float, counts: Sequence[int], probs: Sequence[float]) -> float:
    total = log_mult
    for c, p in zip(counts, probs):
        if c == 0:
            continue
        if p == 0.0:
            return 0.0
        total += c * math.log(p)
    return math.exp(total)


def _renormalize(vec: List[float]) -> List[float]:
    s = math.fsum(vec)
    return [v / s for v in vec]


def _compositions(k: int, m: int):
    """Count vectors of length m summing to k, first coordinate descending."""
    if m == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(k - first, m - 1):
            yield (first,) + rest


def compose_pairs(pairs: Sequence[DiscreteMechanismPair]) -> DiscreteMechanismPair:
    """Independent composition of mechanisms run on the same database.

    Identical inputs are collapsed to outcome counts (k + 1 outcomes for k
    binary pairs); otherwise the full product space is enumerated.
    """
    if not pairs:
        raise DomainError("cannot compose an empty list")
    if len(pairs) == 1:
        return pairs[0]
    first = pairs[0]
    if all(p == first for p in pairs[1:]):
        k, m = len(pairs), len(first.outcomes)
        if math.comb(k + m - 1, m - 1) > MAX_OUTCOMES:
            raise DomainError("composed outcome space exceeds the size guard")
        return _collapse_identical(first, k)
    size = math.prod(len(p.outcomes) for p in pairs)
    if size > MAX_OUTCOMES:
        raise DomainError(f"product space of {size} outcomes exceeds the guard of {MAX_OUTCOMES}")
    outcomes, pw, po = [], [], []
    for combo in itertools.product(*(range(len(p.outcomes)) for p in pairs)):
        outcomes.append(tuple(p.outcomes[i] for p, i in zip(pairs, combo)))
        pw.append(math.prod(p.prob_with[i] for p, i in zip(pairs, combo)))
        po.append(math.prod(p.prob_without[i] for p, i in zip(pairs, combo)))
    return DiscreteMechanismPair(tuple(outcomes), _renormalize(pw), _renormalize(po))
