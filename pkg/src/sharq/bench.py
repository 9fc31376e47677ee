"""Benchmark harness: synthetic instances, agreement metrics, suites.

Instances are generated from seeded random datasets with rules drawn
from observed rows, so every measure (including confidence) is defined.
Suites emit machine-readable rows; the CLI writes them as CSV.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import spearmanr

from .approx import ApproxConfig, approx_sharq_multi, optimized_set_sizes
from .dataset import Dataset, Element
from .errors import ConfigError
from .exact import coalition_stats, count_naive_coalitions, sharq_star_multi, sharq_star_single, valid_coalitions
from .miner import Rule, RuleSet
from .scoring import MeasureConfig, rule_score, score_rules


@dataclass(frozen=True)
class ScoreDistribution:
    """How generated rules get their scores.

    kind "is" derives scores from the instance's own support and lift;
    "uniform" and "lognormal" draw synthetic scores from the named
    distribution (keeping data-backed support and lift).
    """

    kind: str = "is"
    low: float = 0.5
    high: float = 2.0
    mu: float = 0.0
    sigma: float = 0.5

    def __post_init__(self):
        if self.kind not in ("is", "uniform", "lognormal"):
            raise ConfigError(f"unknown score distribution {self.kind!r}")


@dataclass(frozen=True)
class InstanceConfig:
    n_attributes: int = 6
    values_per_attribute: int = 3
    n_rules: int = 25
    rule_length_range: tuple[int, int] = (2, 4)
    score_distribution: ScoreDistribution = field(default_factory=ScoreDistribution)
    n_rows: int = 40
    seed: int = 0

    def __post_init__(self):
        lo, hi = self.rule_length_range
        if lo < 2 or hi < lo:
            raise ConfigError(f"bad rule length range {self.rule_length_range}")
        if hi > self.n_attributes:
            raise ConfigError(
                f"rule length {hi} exceeds {self.n_attributes} attributes"
            )
        if self.n_attributes < 1 or self.values_per_attribute < 1:
            raise ConfigError("need at least one attribute and one value")
        if self.n_rules < 1 or self.n_rows < 1:
            raise ConfigError("need at least one rule and one row")


def generate_instance(cfg: InstanceConfig) -> tuple[Dataset, RuleSet]:
    """Seed-reproducible dataset plus rules drawn from its rows.

    Rule element sets are sampled from single rows, so joint supports
    are positive and lift and confidence are always defined.  Requests
    that exhaust the distinct (lhs, rhs) vocabulary return fewer rules.
    """
    rng = np.random.default_rng(cfg.seed)
    attributes = tuple(f"a{i:02d}" for i in range(cfg.n_attributes))
    values = tuple(f"v{j}" for j in range(cfg.values_per_attribute))

    # skewed per-attribute value distributions give informative
    # frequency ranks downstream
    rows = []
    col_probs = [
        rng.dirichlet(np.ones(cfg.values_per_attribute)) for _ in attributes
    ]
    for _ in range(cfg.n_rows):
        rows.append(
            tuple(
                values[int(rng.choice(cfg.values_per_attribute, p=p))]
                for p in col_probs
            )
        )
    data = Dataset(attributes, tuple(rows))

    masks: dict[Element, int] = {}
    for i, row in enumerate(rows):
        for a, v in zip(attributes, row):
            e = Element(a, v)
            masks[e] = masks.get(e, 0) | (1 << i)

    def sup(elements: Iterable[Element]) -> float:
        m = ~0
        for e in elements:
            m &= masks[e]
            m &= (1 << cfg.n_rows) - 1
        return m.bit_count() / cfg.n_rows

    lo, hi = cfg.rule_length_range
    dist = cfg.score_distribution
    rules: list[Rule] = []
    seen: set[tuple[frozenset, frozenset]] = set()
    attempts = 0
    max_attempts = 60 * cfg.n_rules + 1000
    while len(rules) < cfg.n_rules and attempts < max_attempts:
        attempts += 1
        row = rows[int(rng.integers(0, cfg.n_rows))]
        length = int(rng.integers(lo, hi + 1))
        attr_idx = rng.choice(cfg.n_attributes, size=length, replace=False)
        elements = [Element(attributes[i], row[i]) for i in sorted(attr_idx)]
        order = rng.permutation(length)
        lhs_size = int(rng.integers(1, length))
        lhs = frozenset(elements[i] for i in order[:lhs_size])
        rhs = frozenset(elements[i] for i in order[lhs_size:])
        key = (lhs, rhs)
        if key in seen:
            continue
        seen.add(key)
        s_all = sup(elements)
        s_lift = s_all / (sup(lhs) * sup(rhs))
        if dist.kind == "uniform":
            score = float(rng.uniform(dist.low, dist.high))
        elif dist.kind == "lognormal":
            score = float(rng.lognormal(dist.mu, dist.sigma))
        else:
            score = math.sqrt(s_all * s_lift)
        rules.append(Rule(lhs, rhs, s_all, s_lift, score))
    return data, RuleSet(rules)


def _top_k(scores: Mapping[Element, float], k: int) -> set[Element]:
    ordered = sorted(scores, key=lambda e: (-scores[e], e))
    return set(ordered[:k])


def precision_at_k(
    rank_a: Mapping[Element, float],
    rank_b: Mapping[Element, float],
    k: int,
) -> float:
    """Overlap of the two top-k lists divided by k; k is clamped to the
    element-set size."""
    if set(rank_a) != set(rank_b):
        raise ConfigError("rankings must cover the same element set")
    k = min(k, len(rank_a))
    if k <= 0:
        raise ConfigError("k must be positive")
    return len(_top_k(rank_a, k) & _top_k(rank_b, k)) / k


def avg_precision_at_10(
    rank_a: Mapping[Element, float], rank_b: Mapping[Element, float]
) -> float:
    """Mean of p@k for k = 1..10 (early disagreements weigh more)."""
    return sum(precision_at_k(rank_a, rank_b, k) for k in range(1, 11)) / 10.0


def spearman(
    scores_a: Mapping[Element, float], scores_b: Mapping[Element, float]
) -> float | None:
    """Spearman rank correlation with average-rank ties; None when a
    side is constant and the correlation is undefined."""
    if set(scores_a) != set(scores_b):
        raise ConfigError("score maps must cover the same element set")
    keys = sorted(scores_a)
    if len(keys) < 2:
        raise ConfigError("spearman needs at least two elements")
    a = [scores_a[k] for k in keys]
    b = [scores_b[k] for k in keys]
    if len(set(a)) == 1 or len(set(b)) == 1:
        return None
    rho = spearmanr(a, b).statistic
    return float(rho)


def run_counting_suite(
    instances: Sequence[tuple[Dataset, RuleSet]],
    enumeration_limit: int = 100_000,
) -> list[dict]:
    """Per element: closed-form naive count, enumerated optimized count,
    and the rule-count bound.  Small naive counts are cross-checked by
    enumeration."""
    out = []
    for idx, (_, rs) in enumerate(instances):
        E = sorted(rs.universe)
        bound = len(rs) * (rs.tau + 1)
        for e in E:
            stats = coalition_stats(e, E, rs)
            enumerated = None
            if stats.naive_count <= enumeration_limit:
                enumerated = sum(1 for _ in valid_coalitions(e, E))
            out.append(
                {
                    "instance": idx,
                    "element": str(e),
                    "naive_count": stats.naive_count,
                    "naive_enumerated": enumerated,
                    "optimized_count": stats.optimized_count,
                    "bound_rules_tau": bound,
                    "gamma": stats.gamma,
                    "tau": stats.tau,
                }
            )
    return out


def run_runtime_suite(
    instances: Sequence[tuple[Dataset, RuleSet]],
    repetitions: int = 5,
    cfg: MeasureConfig = MeasureConfig(),
) -> list[dict]:
    """Median wall time of the multi-element pass against a sequential
    per-element loop.  Outputs are compared for 1e-9 agreement before
    any timing is reported; both paths run single-threaded."""
    out = []
    for idx, (_, rs) in enumerate(instances):
        E = sorted(rs.universe)

        def run_multi():
            return sharq_star_multi(E, rs, cfg)

        def run_sequential():
            return {e: sharq_star_single(e, E, rs, cfg) for e in E}

        multi, seq = run_multi(), run_sequential()  # warm-up + equality gate
        worst = max(
            abs(multi[e] - seq[e]) / max(1.0, abs(seq[e])) for e in E
        )
        if worst > 1e-9:
            raise AssertionError(
                f"multi/sequential disagreement {worst} on instance {idx}"
            )
        t_multi, t_seq = [], []
        for _ in range(repetitions):
            start = time.perf_counter()
            run_multi()
            t_multi.append(time.perf_counter() - start)
            start = time.perf_counter()
            run_sequential()
            t_seq.append(time.perf_counter() - start)
        med_multi = statistics.median(t_multi)
        med_seq = statistics.median(t_seq)
        out.append(
            {
                "instance": idx,
                "n_elements": len(E),
                "n_rules": len(rs),
                "tau": rs.tau,
                "multi_s": med_multi,
                "sequential_s": med_seq,
                "speedup": med_seq / med_multi if med_multi > 0 else math.inf,
                "max_rel_diff": worst,
            }
        )
    return out


def _resolve_budget(budget: float, set_size: int) -> int:
    """Fractional budgets mean a share of the optimized coalition set."""
    if 0 < budget < 1:
        return max(1, math.ceil(budget * set_size))
    return max(1, int(budget))


def run_approx_suite(
    instances: Sequence[tuple[Dataset, RuleSet]],
    schemes: Sequence[str] = ("kernel", "monte_carlo", "antithetic", "stratified", "sobol"),
    budgets: Sequence[float] = (0.1,),
    seed: int = 0,
    cfg: MeasureConfig = MeasureConfig(),
) -> list[dict]:
    """Agreement of each sampling scheme with the exact scores.

    Fractional budgets are resolved per element against its optimized
    coalition-set size.
    """
    out = []
    for idx, (_, rs) in enumerate(instances):
        E = sorted(rs.universe)
        exact = sharq_star_multi(E, rs, cfg)
        sizes = optimized_set_sizes(E, rs)
        for scheme in schemes:
            for budget in budgets:
                per_element = {
                    e: _resolve_budget(budget, sizes[e]) for e in E
                }
                estimates = approx_sharq_multi(
                    E,
                    rs,
                    cfg,
                    ApproxConfig(scheme=scheme, budget=1, seed=seed),
                    budgets=per_element,
                )
                rho = spearman(exact, estimates)
                out.append(
                    {
                        "instance": idx,
                        "scheme": scheme,
                        "budget": budget,
                        "p_at_10": precision_at_k(exact, estimates, 10),
                        "ap_at_10": avg_precision_at_10(exact, estimates),
                        "spearman": rho if rho is not None else "",
                    }
                )
    return out


def run_ablation_suite(
    instances: Sequence[tuple[Dataset, RuleSet]],
    measures: Sequence[str] = ("lift", "confidence", "support"),
    aggregators: Sequence[str] = ("sum", "avg", "top2", "top3"),
) -> list[dict]:
    """Rank agreement between the default scoring (IS, max) and the
    alternative measures and aggregators."""
    out = []
    for idx, (data, rs) in enumerate(instances):
        E = sorted(rs.universe)
        base_cfg = MeasureConfig(measure="is", aggregator="max")
        base_rules = score_rules(rs, "is", data, overwrite=True)
        base = sharq_star_multi(E, base_rules, base_cfg)
        for measure in measures:
            alt_rules = score_rules(rs, measure, data, overwrite=True)
            alt = sharq_star_multi(E, alt_rules, MeasureConfig(measure=measure, aggregator="max"))
            rho = spearman(base, alt)
            out.append(
                {
                    "instance": idx,
                    "kind": "measure",
                    "variant": measure,
                    "spearman": rho if rho is not None else "",
                }
            )
        for agg in aggregators:
            alt = sharq_star_multi(
                E, base_rules, MeasureConfig(measure="is", aggregator=agg)
            )
            rho = spearman(base, alt)
            out.append(
                {
                    "instance": idx,
                    "kind": "aggregator",
                    "variant": agg,
                    "spearman": rho if rho is not None else "",
                }
            )
    return out
