"""Exact element-contribution scores over association rule sets.

An element's score is a Shapley value over element coalitions, the
subsets of a chosen element set E with pairwise-distinct attributes
that exclude the element's own attribute.  A coalition's utility is the
aggregated interestingness of the rules whose element set equals the
coalition exactly.

The naive summation ranges over every valid coalition and its size is
the product of (group size + 1) over the other attributes, exponential
in the number of attributes.  The optimized summation visits only
coalitions that can change the utility: a rule's full element set or
that set minus one element.  Both paths produce identical scores; the
naive path is kept as the testing oracle.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

from .dataset import Element
from .errors import ConfigError, OracleBudgetError
from .miner import Rule, RuleSet
from .scoring import MeasureConfig, rule_set_utility

# canonically sorted by (attribute, value); used directly as index keys
Coalition = tuple[Element, ...]

DEFAULT_ORACLE_BUDGET = 10**6


def make_coalition(elements: Iterable[Element]) -> Coalition:
    return tuple(sorted(set(elements)))


def shapley_weight(s: int, n: int) -> float:
    """|S|! (n - |S| - 1)! / n!  for a coalition of size s among n players."""
    return 1.0 / (n * math.comb(n - 1, s))


def _weights_upto(n: int) -> list[float]:
    return [shapley_weight(s, n) for s in range(n)]


def _attribute_groups(elements: Iterable[Element]) -> dict[str, list[Element]]:
    groups: dict[str, list[Element]] = defaultdict(list)
    for e in sorted(set(elements)):
        groups[e.attribute].append(e)
    return dict(sorted(groups.items()))


def _insert_element(key: Coalition, e: Element) -> Coalition:
    pos = bisect_left(key, e)
    return key[:pos] + (e,) + key[pos:]


def valid_coalitions(e: Element, E: Iterable[Element]) -> Iterator[Coalition]:
    """Yield every subset of E with pairwise-distinct attributes not
    using e's attribute, the empty coalition included.

    The stream is exponential by design; gate on
    count_naive_coalitions before consuming it.
    """
    E = set(E)
    if e not in E:
        raise ConfigError(f"element {e} not in the element set")
    groups = _attribute_groups(E)
    groups.pop(e.attribute, None)
    choices = [[None, *members] for members in groups.values()]
    for combo in product(*choices):
        yield tuple(x for x in combo if x is not None)


def count_naive_coalitions(e: Element, E: Iterable[Element]) -> int:
    """Closed form: product of (|E_a| + 1) over attributes a != attr(e)."""
    E = set(E)
    if e not in E:
        raise ConfigError(f"element {e} not in the element set")
    groups = _attribute_groups(E)
    groups.pop(e.attribute, None)
    return math.prod(len(members) + 1 for members in groups.values())


def _utility_by_key(
    rs: RuleSet, cfg: MeasureConfig, keys: Iterable[Coalition] | None = None
) -> dict[Coalition, float]:
    """Utility of every rule element set (exact-match semantics); keys
    restricts the table when given."""
    scores: dict[Coalition, list[float]] = defaultdict(list)
    wanted = set(keys) if keys is not None else None
    for r in rs:
        key = r.elements_key
        if wanted is not None and key not in wanted:
            continue
        if r.score is None:
            raise ConfigError(
                "rule scores are not populated; run score_rules first"
            )
        scores[key].append(r.score)
    return {k: rule_set_utility(v, cfg) for k, v in scores.items()}


def naive_sharq(
    e: Element,
    E: Iterable[Element],
    rs: RuleSet,
    cfg: MeasureConfig = MeasureConfig(),
    oracle_budget: int = DEFAULT_ORACLE_BUDGET,
) -> float:
    """Reference summation over all valid coalitions.

    Refuses instances whose coalition count exceeds oracle_budget,
    reporting the count; large instances belong to the optimized path.
    """
    E = set(E)
    count = count_naive_coalitions(e, E)
    if count > oracle_budget:
        raise OracleBudgetError(count, oracle_budget)
    utility = _utility_by_key(rs, cfg)
    n = len(E)
    weights = _weights_upto(n)
    total = 0.0
    for S in valid_coalitions(e, E):
        diff = utility.get(_insert_element(S, e), 0.0) - utility.get(S, 0.0)
        if diff:
            total += weights[len(S)] * diff
    return total


def _rule_coalitions_within(
    r: Rule, Eset: frozenset[Element]
) -> list[Coalition]:
    """Members of C_r that fit inside E: the rule's element set and each
    leave-one-out subset, restricted to subsets of E."""
    els = r.elements_key
    outside = [x for x in els if x not in Eset]
    if len(outside) > 1:
        return []
    if outside:
        i = els.index(outside[0])
        return [els[:i] + els[i + 1 :]]
    return [els] + [els[:i] + els[i + 1 :] for i in range(len(els))]


def optimized_coalitions(
    e: Element, E: Iterable[Element], rs: RuleSet
) -> set[Coalition]:
    """Coalitions that can change the score: subsets of some rule's
    element set missing at most one element, within E, excluding e's
    attribute."""
    Eset = frozenset(E)
    a = e.attribute
    out: set[Coalition] = set()
    for r in rs:
        for S in _rule_coalitions_within(r, Eset):
            if all(x.attribute != a for x in S):
                out.add(S)
    return out


def _optimized_with_sources(
    e: Element, E: Iterable[Element], rs: RuleSet
) -> tuple[list[Coalition], dict[Coalition, Coalition]]:
    """Canonically sorted optimized coalitions plus, per coalition, the
    element set of the first rule that produced it (used by the
    antithetic sampler to form partner coalitions)."""
    Eset = frozenset(E)
    a = e.attribute
    source: dict[Coalition, Coalition] = {}
    for r in rs:
        for S in _rule_coalitions_within(r, Eset):
            if S not in source and all(x.attribute != a for x in S):
                source[S] = r.elements_key
    return sorted(source), source


@dataclass
class CoalitionRulesIndex:
    """Exact-match map from a coalition key to the rules whose element
    set equals the key; absent keys mean no rules (utility 0)."""

    entries: dict[Coalition, tuple[Rule, ...]]

    def rules_at(self, key: Coalition) -> tuple[Rule, ...]:
        return self.entries.get(key, ())

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class AttributeCoalitionIndex:
    """Per attribute, the optimized coalitions that avoid it, in
    canonical order.  Elements sharing an attribute share one entry."""

    entries: dict[str, tuple[Coalition, ...]]

    def coalitions_for(self, attribute: str) -> tuple[Coalition, ...]:
        return self.entries.get(attribute, ())


def build_indices(
    rs: RuleSet, E: Iterable[Element]
) -> tuple[CoalitionRulesIndex, AttributeCoalitionIndex]:
    """One pass over the rules inside E.

    Registers each rule under its exact element set only, and spreads
    every generated coalition across the attribute index entries of all
    attributes the coalition does not use.
    """
    Eset = frozenset(E)
    attrs_E = sorted({el.attribute for el in Eset})
    attrs_E_set = set(attrs_E)

    rules_at: dict[Coalition, list[Rule]] = {}
    seen: set[Coalition] = set()
    for r in rs:
        els = r.elements_key
        if not all(x in Eset for x in els):
            continue
        rules_at.setdefault(els, []).append(r)
        seen.add(els)
        for i in range(len(els)):
            seen.add(els[:i] + els[i + 1 :])

    by_attr: dict[str, list[Coalition]] = {a: [] for a in attrs_E}
    for S in sorted(seen):
        open_attrs = attrs_E_set.difference(x.attribute for x in S)
        for a in open_attrs:
            by_attr[a].append(S)

    return (
        CoalitionRulesIndex({k: tuple(v) for k, v in rules_at.items()}),
        AttributeCoalitionIndex({a: tuple(v) for a, v in by_attr.items()}),
    )


def sharq_star_single(
    e: Element,
    E: Iterable[Element],
    rs: RuleSet,
    cfg: MeasureConfig = MeasureConfig(),
) -> float:
    """Optimized score of a single element; equals naive_sharq on every
    input the oracle accepts."""
    E = frozenset(E)
    if e not in E:
        raise ConfigError(f"element {e} not in the element set")
    coalitions = sorted(optimized_coalitions(e, E, rs))
    utility = _utility_by_key(rs, cfg)
    return _score_from_coalitions(e, coalitions, utility, len(E))


def _score_from_coalitions(
    e: Element,
    coalitions: Sequence[Coalition],
    utility: Mapping[Coalition, float],
    n: int,
) -> float:
    weights = _weights_upto(n)
    total = 0.0
    get = utility.get
    for S in coalitions:
        diff = get(_insert_element(S, e), 0.0) - get(S, 0.0)
        if diff:
            total += weights[len(S)] * diff
    return total


def sharq_star_multi(
    E: Iterable[Element],
    rs: RuleSet,
    cfg: MeasureConfig = MeasureConfig(),
    threads: int | None = None,
) -> dict[Element, float]:
    """Score every element of E off one shared pair of indices.

    The indices are immutable once built; per-element scoring only
    reads them, so it may fan out over a thread pool without changing
    the results.
    """
    elements = sorted(set(E))
    if not elements:
        return {}
    rules_index, attr_index = build_indices(rs, elements)
    utility: dict[Coalition, float] = {}
    for key, rules in rules_index.entries.items():
        scores = []
        for r in rules:
            if r.score is None:
                raise ConfigError(
                    "rule scores are not populated; run score_rules first"
                )
            scores.append(r.score)
        utility[key] = rule_set_utility(scores, cfg)
    n = len(elements)

    def score_one(el: Element) -> float:
        return _score_from_coalitions(
            el, attr_index.coalitions_for(el.attribute), utility, n
        )

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(score_one, elements))
    else:
        values = [score_one(el) for el in elements]
    return dict(zip(elements, values))


@dataclass(frozen=True)
class CoalitionStats:
    """Coalition-count comparison for one element."""

    naive_count: int
    optimized_count: int
    gamma: float
    tau: int


def coalition_stats(
    e: Element, E: Iterable[Element], rs: RuleSet
) -> CoalitionStats:
    """Naive count by the closed form, optimized count by enumeration,
    plus the rule-set quantities bounding it."""
    E = frozenset(E)
    naive = count_naive_coalitions(e, E)
    optimized = len(optimized_coalitions(e, E, rs))
    if len(rs):
        gamma = sum(1 for r in rs if e.attribute not in r.attributes) / len(rs)
    else:
        gamma = 0.0
    return CoalitionStats(naive, optimized, gamma, rs.tau)
