"""Baseline contribution measures and the importance reports.

Covers the generic baselines (best containing rule, utility drop on
removal), frequency-normalized contribution scores, and the derived
rule-level and attribute-level importance views.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .dataset import Dataset, Element, element_frequency
from .errors import ConfigError
from .exact import sharq_star_multi
from .miner import Rule, RuleSet
from .scoring import MeasureConfig, rule_set_utility


@dataclass(frozen=True)
class ScoreRow:
    element: Element
    score: float
    rank: int


@dataclass(frozen=True)
class ScoreTable:
    """Per-element scores with deterministic 1-based ranks.

    Ranks descend by score; ties break lexicographically on
    (attribute, value) so regression outputs are stable.
    """

    rows: tuple[ScoreRow, ...]
    method: str
    scale: float = 1.0

    def as_dict(self) -> dict[Element, float]:
        return {row.element: row.score for row in self.rows}

    def rank_of(self, e: Element) -> int:
        for row in self.rows:
            if row.element == e:
                return row.rank
        raise KeyError(f"element {e} not in score table")


def build_score_table(
    scores: Mapping[Element, float], method: str, scale: float = 1.0
) -> ScoreTable:
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    rows = tuple(
        ScoreRow(e, s, rank) for rank, (e, s) in enumerate(ordered, start=1)
    )
    return ScoreTable(rows, method, scale)


def rank_map(scores: Mapping[Element, float]) -> dict[Element, int]:
    """1-based ordinal ranks, descending by score, ties lexicographic."""
    ordered = sorted(scores, key=lambda e: (-scores[e], e))
    return {e: i for i, e in enumerate(ordered, start=1)}


def i_top(e: Element, rs: RuleSet) -> float:
    """Score of the best rule containing the element; 0 if none."""
    best = 0.0
    for r in rs:
        if e in r.elements:
            if r.score is None:
                raise ConfigError(
                    "rule scores are not populated; run score_rules first"
                )
            best = max(best, r.score)
    return best


def influence(
    e: Element, rs: RuleSet, cfg: MeasureConfig = MeasureConfig()
) -> float:
    """Utility drop when all rules containing the element are removed."""
    all_scores = [r.score for r in rs]
    kept = [r.score for r in rs if e not in r.elements]
    if any(s is None for s in all_scores):
        raise ConfigError("rule scores are not populated; run score_rules first")
    return rule_set_utility(all_scores, cfg) - rule_set_utility(kept, cfg)


def normalized_sharq(
    E: Iterable[Element],
    rs: RuleSet,
    cfg: MeasureConfig,
    d: Dataset,
) -> dict[Element, float]:
    """Frequency rank over contribution rank, per element.

    Rank 1 goes to the most frequent and to the top-scoring element;
    values below 1 flag elements that are common in the data but
    contribute little.
    """
    elements = sorted(set(E))
    scores = sharq_star_multi(elements, rs, cfg)
    freqs = {e: element_frequency(d, e) for e in elements}
    score_rank = rank_map(scores)
    freq_rank = rank_map(freqs)
    return {e: freq_rank[e] / score_rank[e] for e in elements}


def r_sharq(r: Rule, norm: Mapping[Element, float]) -> float:
    """Rule importance: the minimum normalized score of its elements."""
    try:
        return min(norm[e] for e in r.elements)
    except KeyError as exc:
        raise KeyError(f"element {exc.args[0]} has no normalized score")


def min_element(r: Rule, norm: Mapping[Element, float]) -> Element:
    return min(r.elements, key=lambda e: (norm[e], e))


def a_sharq(
    attribute: str,
    E: Iterable[Element],
    rs: RuleSet,
    norm: Mapping[Element, float],
) -> float | None:
    """Attribute importance: mean normalized score over the attribute's
    elements that appear in at least one rule; None when none do."""
    participating = [
        e
        for e in set(E)
        if e.attribute == attribute and any(e in r.elements for r in rs)
    ]
    if not participating:
        return None
    return sum(norm[e] for e in participating) / len(participating)


def score_categories(rs: RuleSet) -> tuple[float, float, float]:
    """Equal-width tertile boundaries (lo, step, hi) of the rule score
    range; a degenerate range is signalled by step 0."""
    scores = [r.score for r in rs]
    if not scores or any(s is None for s in scores):
        raise ConfigError("rule scores are not populated; run score_rules first")
    lo, hi = min(scores), max(scores)
    return lo, (hi - lo) / 3.0, hi


def categorize(score: float, lo: float, step: float) -> str:
    """low / medium / high tertile; the top boundary is inclusive and a
    degenerate range puts every rule in high."""
    if step == 0.0:
        return "high"
    idx = min(2, int((score - lo) // step))
    return ("low", "medium", "high")[idx]


@dataclass(frozen=True)
class ElementReportRow:
    element: Element
    sharq: float
    normalized_sharq: float
    freq_pct: float
    n_rules_low: int
    n_rules_med: int
    n_rules_high: int


def element_report(
    E: Iterable[Element],
    rs: RuleSet,
    cfg: MeasureConfig,
    d: Dataset,
) -> list[ElementReportRow]:
    """One row per element, sorted by contribution score descending,
    with frequency and per-tertile counts of the containing rules."""
    if not len(rs):
        raise ConfigError("element report needs a non-empty rule set")
    elements = sorted(set(E))
    scores = sharq_star_multi(elements, rs, cfg)
    norm = normalized_sharq(elements, rs, cfg, d)
    lo, step, _ = score_categories(rs)
    rows = []
    for e in elements:
        counts = {"low": 0, "medium": 0, "high": 0}
        for r in rs:
            if e in r.elements:
                counts[categorize(r.score, lo, step)] += 1
        rows.append(
            ElementReportRow(
                element=e,
                sharq=scores[e],
                normalized_sharq=norm[e],
                freq_pct=100.0 * element_frequency(d, e),
                n_rules_low=counts["low"],
                n_rules_med=counts["medium"],
                n_rules_high=counts["high"],
            )
        )
    rows.sort(key=lambda row: (-row.sharq, row.element))
    return rows


def prune_rules(
    rs: RuleSet, norm: Mapping[Element, float], threshold: float
) -> RuleSet:
    """Keep rules whose importance is at least the threshold."""
    if threshold < 0:
        raise ConfigError(f"prune threshold must be >= 0, got {threshold}")
    return RuleSet(r for r in rs if r_sharq(r, norm) >= threshold)
