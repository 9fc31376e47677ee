"""Rule interestingness measures and rule-set aggregation.

The aggregated interestingness of a rule set is the utility function of
the contribution game: an aggregator applied to the individual rule
scores, 0 for the empty set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .dataset import Dataset, Element
from .errors import ConfigError, DataError, MeasureError
from .miner import Rule, RuleSet

MEASURES = ("is", "lift", "confidence", "support")
AGGREGATORS = ("max", "sum", "avg", "top2", "top3")


@dataclass(frozen=True)
class MeasureConfig:
    """Which rule measure to score with, how to aggregate a rule set,
    and a positive report-level multiplier on rule scores."""

    measure: str = "is"
    aggregator: str = "max"
    scale: float = 1.0

    def __post_init__(self):
        if self.measure not in MEASURES:
            raise ConfigError(f"unknown measure {self.measure!r}")
        if self.aggregator not in AGGREGATORS:
            raise ConfigError(f"unknown aggregator {self.aggregator!r}")
        if self.scale <= 0:
            raise ConfigError(f"scale must be positive, got {self.scale}")


def _itemset_support(elements: Iterable[Element], d: Dataset) -> float:
    if d.n_rows == 0:
        raise DataError("support is undefined on an empty dataset")
    pos = d._attr_pos
    pairs = [(pos[e.attribute], e.value) for e in elements]
    hits = sum(
        1 for row in d.rows if all(row[i] == v for i, v in pairs)
    )
    return hits / d.n_rows


def support(r: Rule, d: Dataset) -> float:
    """Fraction of rows containing every element of the rule."""
    return _itemset_support(r.elements, d)


def lift(r: Rule, d: Dataset) -> float:
    """support(lhs + rhs) / (support(lhs) * support(rhs))."""
    s_lhs = _itemset_support(r.lhs, d)
    s_rhs = _itemset_support(r.rhs, d)
    if s_lhs == 0.0 or s_rhs == 0.0:
        raise MeasureError("lift is undefined: a rule side has zero support")
    return support(r, d) / (s_lhs * s_rhs)


def confidence(r: Rule, d: Dataset) -> float:
    """support(lhs + rhs) / support(lhs)."""
    s_lhs = _itemset_support(r.lhs, d)
    if s_lhs == 0.0:
        raise MeasureError("confidence is undefined: LHS has zero support")
    return support(r, d) / s_lhs


def is_score(r: Rule, d: Dataset) -> float:
    """sqrt(support * lift), the default interestingness measure."""
    return math.sqrt(support(r, d) * lift(r, d))


def aggregate(scores: Iterable[float], agg: str = "max") -> float:
    """Aggregate a multiset of rule scores; the empty multiset maps to 0."""
    values = list(scores)
    if not values:
        return 0.0
    if agg == "max":
        return max(values)
    if agg == "sum":
        return math.fsum(values)
    if agg == "avg":
        return math.fsum(values) / len(values)
    if agg in ("top2", "top3"):
        k = 2 if agg == "top2" else 3
        return math.fsum(sorted(values, reverse=True)[:k])
    raise ConfigError(f"unknown aggregator {agg!r}")


def rule_set_utility(scores: Iterable[float], cfg: MeasureConfig) -> float:
    return cfg.scale * aggregate(scores, cfg.aggregator)


def rule_score(r: Rule, measure: str, d: Dataset | None = None) -> float:
    """Score one rule under the given measure.

    is/lift/support derive from the rule's stored support and lift;
    confidence needs the dataset the rule was mined from.
    """
    if measure == "is":
        return math.sqrt(r.support * r.lift)
    if measure == "lift":
        return r.lift
    if measure == "support":
        return r.support
    if measure == "confidence":
        if d is None:
            raise ConfigError("the confidence measure needs a dataset")
        return confidence(r, d)
    raise ConfigError(f"unknown measure {measure!r}")


def score_rules(
    rs: RuleSet,
    measure: str = "is",
    d: Dataset | None = None,
    overwrite: bool = False,
) -> RuleSet:
    """Populate rule scores under the measure.

    Externally supplied scores are kept verbatim unless overwrite is
    set (used for measure ablations).
    """
    def fn(r: Rule) -> float:
        if r.score is not None and not overwrite:
            return r.score
        return rule_score(r, measure, d)

    return rs.map_scores(fn)
