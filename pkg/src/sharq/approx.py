"""Sampling estimators for the optimized contribution score.

Every scheme samples coalitions from the enumerated optimized set,
where all of the score mass lives, and forms an importance-weighted
mean: a sampled coalition S contributes w(S) / p(S) times the utility
difference, with w the Shapley weight and p the scheme's sampling
probability.  Once the budget covers the whole set, every scheme falls
back to exhaustive enumeration and returns the exact value.
"""

from __future__ import annotations

import hashlib
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .dataset import Element
from .errors import ConfigError
from .exact import (
    Coalition,
    _insert_element,
    _optimized_with_sources,
    _utility_by_key,
    shapley_weight,
)
from .miner import RuleSet
from .scoring import MeasureConfig

SCHEMES = ("kernel", "monte_carlo", "antithetic", "stratified", "sobol")


@dataclass(frozen=True)
class ApproxConfig:
    """Sampling scheme, per-element coalition budget, and seed.

    The antithetic scheme works in pairs, so an odd budget is rounded
    up to the next even number.
    """

    scheme: str = "kernel"
    budget: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown sampling scheme {self.scheme!r}")
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")


def kernel_weight(n: int, s: int) -> float:
    """(n - 1) / (C(n, s) * s * (n - s)); defined for 0 < s < n."""
    if n < 2:
        raise ConfigError(f"kernel weight needs n >= 2, got {n}")
    if s <= 0 or s >= n:
        raise ConfigError(
            f"kernel weight is infinite at coalition size {s} of {n}"
        )
    return (n - 1) / (math.comb(n, s) * s * (n - s))


def _element_rng(seed: int, e: Element) -> np.random.Generator:
    """Stable per-element stream so multi-element runs reproduce
    per-element calls regardless of evaluation order."""
    digest = hashlib.blake2b(
        f"{seed}:{e.attribute}={e.value}".encode(), digest_size=8
    ).digest()
    return np.random.default_rng(
        np.random.SeedSequence([seed & 0xFFFFFFFF, int.from_bytes(digest, "big")])
    )


def _van_der_corput(k: int) -> float:
    """Base-2 radical inverse of k, the 1-d low-discrepancy sequence."""
    u, denom = 0.0, 1.0
    while k:
        denom *= 2.0
        u += (k & 1) / denom
        k >>= 1
    return u


class _ElementSampler:
    """Shared per-element sampling state over the enumerated coalitions."""

    def __init__(
        self,
        e: Element,
        coalitions: Sequence[Coalition],
        sources: Mapping[Coalition, Coalition],
        utility: Mapping[Coalition, float],
        n: int,
    ):
        self.e = e
        self.coalitions = coalitions
        self.sources = sources
        self.utility = utility
        self.n = n
        self.index_of = {S: i for i, S in enumerate(coalitions)}
        self._partners: list[int | None] | None = None
        self._partner_prob: list[float] | None = None

    def partner_tables(self) -> tuple[list[int | None], list[float]]:
        """Partner index per coalition (complement inside the source
        rule, None when outside the set) and the exact marginal
        probability of each coalition under the paired draw, used as
        the importance denominator for partner samples."""
        if self._partners is None:
            M = len(self.coalitions)
            partners: list[int | None] = []
            preimage = [0] * M
            fallbacks = 0
            for S in self.coalitions:
                src = self.sources[S]
                complement = tuple(x for x in src if x not in S)
                j = self.index_of.get(complement)
                partners.append(j)
                if j is None:
                    fallbacks += 1
                else:
                    preimage[j] += 1
            self._partners = partners
            self._partner_prob = [
                preimage[i] / M + fallbacks / (M * M) for i in range(M)
            ]
        return self._partners, self._partner_prob

    def term(self, i: int) -> float:
        """Shapley-weighted utility difference of the i-th coalition."""
        S = self.coalitions[i]
        get = self.utility.get
        diff = get(_insert_element(S, self.e), 0.0) - get(S, 0.0)
        if not diff:
            return 0.0
        return shapley_weight(len(S), self.n) * diff

    def exact(self) -> float:
        return math.fsum(self.term(i) for i in range(len(self.coalitions)))


def _estimate(sampler: _ElementSampler, acfg: ApproxConfig) -> float:
    M = len(sampler.coalitions)
    if M == 0:
        return 0.0
    budget = acfg.budget
    if acfg.scheme == "antithetic" and budget % 2:
        budget += 1
    if budget >= M:
        return sampler.exact()
    rng = _element_rng(acfg.seed, sampler.e)
    if acfg.scheme == "monte_carlo":
        return _mc(sampler, rng, budget)
    if acfg.scheme == "antithetic":
        return _antithetic(sampler, rng, budget)
    if acfg.scheme == "stratified":
        return _stratified(sampler, rng, budget)
    if acfg.scheme == "sobol":
        return _sobol(sampler, acfg.seed, budget)
    return _kernel(sampler, rng, budget)


def _mc(sampler: _ElementSampler, rng, budget: int) -> float:
    M = len(sampler.coalitions)
    idx = rng.integers(0, M, size=budget)
    return (M / budget) * math.fsum(sampler.term(int(i)) for i in idx)


def _antithetic(sampler: _ElementSampler, rng, budget: int) -> float:
    """Uniform draws paired with the complement of the coalition inside
    its source rule's element set; pairs whose partner falls outside
    the optimized set degrade to independent draws.

    Partner draws are not uniform, so they are importance-weighted by
    their exact marginal probability, keeping the estimate unbiased.
    """
    M = len(sampler.coalitions)
    partners, partner_prob = sampler.partner_tables()
    total = 0.0
    for _ in range(budget // 2):
        i = int(rng.integers(0, M))
        total += M * sampler.term(i)
        j = partners[i]
        if j is None:
            j = int(rng.integers(0, M))
        total += sampler.term(j) / partner_prob[j]
    return total / budget


def _stratified(sampler: _ElementSampler, rng, budget: int) -> float:
    """Equal sample counts per coalition-size stratum; each stratum
    total is estimated by its own uniform mean scaled by stratum mass."""
    strata: dict[int, list[int]] = defaultdict(list)
    for i, S in enumerate(sampler.coalitions):
        strata[len(S)].append(i)
    sizes = sorted(strata)
    base, rem = divmod(budget, len(sizes))
    total = 0.0
    for pos, size in enumerate(sizes):
        m = base + (1 if pos < rem else 0)
        if m == 0:
            continue
        members = strata[size]
        draws = rng.integers(0, len(members), size=m)
        total += (len(members) / m) * math.fsum(
            sampler.term(members[int(i)]) for i in draws
        )
    return total


def _sobol(sampler: _ElementSampler, seed: int, budget: int) -> float:
    """Low-discrepancy indices into the canonically ordered enumeration;
    the seed offsets the sequence start."""
    M = len(sampler.coalitions)
    start = (seed & 0x7FFFFFFF) + 1
    total = 0.0
    for k in range(budget):
        i = min(int(_van_der_corput(start + k) * M), M - 1)
        total += sampler.term(i)
    return (M / budget) * total


def _kernel(sampler: _ElementSampler, rng, budget: int) -> float:
    """Sizes drawn proportionally to the Shapley kernel weight,
    normalized over the sizes present, then uniform within a size.

    Within a size the draws are taken without replacement (collapsing
    to full enumeration when the size class is exhausted), which keeps
    the estimate unbiased while removing duplicate-sample variance.
    """
    strata: dict[int, list[int]] = defaultdict(list)
    for i, S in enumerate(sampler.coalitions):
        strata[len(S)].append(i)
    sizes = sorted(strata)
    raw = np.array([kernel_weight(sampler.n, s) for s in sizes])
    probs = raw / raw.sum()
    counts = rng.multinomial(budget, probs)
    total = 0.0
    for pos, size in enumerate(sizes):
        n_s = int(counts[pos])
        if n_s == 0:
            continue
        members = strata[size]
        k_s = min(n_s, len(members))
        if k_s == len(members):
            chosen = members
        else:
            chosen = [
                members[int(i)]
                for i in rng.choice(len(members), size=k_s, replace=False)
            ]
        class_total = (len(members) / k_s) * math.fsum(
            sampler.term(i) for i in chosen
        )
        total += (n_s / (budget * probs[pos])) * class_total
    return total


def _build_sampler(
    e: Element,
    E: Iterable[Element],
    rs: RuleSet,
    utility: Mapping[Coalition, float],
    n: int,
) -> _ElementSampler:
    coalitions, sources = _optimized_with_sources(e, E, rs)
    return _ElementSampler(e, coalitions, sources, utility, n)


def approx_sharq(
    e: Element,
    E: Iterable[Element],
    rs: RuleSet,
    cfg: MeasureConfig = MeasureConfig(),
    acfg: ApproxConfig = ApproxConfig(),
) -> float:
    """Estimate one element's score; exact when the budget covers the
    optimized coalition set, 0 when that set is empty."""
    Eset = frozenset(E)
    if e not in Eset:
        raise ConfigError(f"element {e} not in the element set")
    utility = _utility_by_key(rs, cfg)
    sampler = _build_sampler(e, Eset, rs, utility, len(Eset))
    return _estimate(sampler, acfg)


def approx_sharq_multi(
    E: Iterable[Element],
    rs: RuleSet,
    cfg: MeasureConfig = MeasureConfig(),
    acfg: ApproxConfig = ApproxConfig(),
    budgets: Mapping[Element, int] | None = None,
) -> dict[Element, float]:
    """Estimate all elements of E, sharing the utility table and the
    per-attribute coalition enumerations (elements with one attribute
    have identical optimized sets).  budgets overrides acfg.budget per
    element when given."""
    elements = sorted(set(E))
    if not elements:
        return {}
    Eset = frozenset(elements)
    utility = _utility_by_key(rs, cfg)
    n = len(elements)
    by_attr: dict[str, tuple[list[Coalition], dict]] = {}
    out: dict[Element, float] = {}
    for e in elements:
        cached = by_attr.get(e.attribute)
        if cached is None:
            cached = _optimized_with_sources(e, Eset, rs)
            by_attr[e.attribute] = cached
        coalitions, sources = cached
        sampler = _ElementSampler(e, coalitions, sources, utility, n)
        element_cfg = acfg
        if budgets is not None:
            element_cfg = ApproxConfig(acfg.scheme, budgets[e], acfg.seed)
        out[e] = _estimate(sampler, element_cfg)
    return out


def optimized_set_sizes(
    E: Iterable[Element], rs: RuleSet
) -> dict[Element, int]:
    """Size of each element's optimized coalition set (shared per
    attribute), for budget planning."""
    elements = sorted(set(E))
    Eset = frozenset(elements)
    by_attr: dict[str, int] = {}
    out = {}
    for e in elements:
        if e.attribute not in by_attr:
            coalitions, _ = _optimized_with_sources(e, Eset, rs)
            by_attr[e.attribute] = len(coalitions)
        out[e] = by_attr[e.attribute]
    return out
