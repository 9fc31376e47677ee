"""Association rules: the bundled Apriori miner and rule-set I/O.

Rules are implications between disjoint element sets with pairwise
distinct attributes.  The miner enumerates every non-trivial LHS/RHS
split of each frequent itemset, so multi-element consequents are
produced as well.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from .dataset import Dataset, Element
from .errors import ConfigError, DataError, RuleValidationError


@dataclass(frozen=True)
class Rule:
    """lhs -> rhs with support, lift, and an optional interestingness score.

    score is None until populated by the scoring module or supplied
    externally; externally supplied scores are kept verbatim.
    """

    lhs: frozenset[Element]
    rhs: frozenset[Element]
    support: float
    lift: float
    score: float | None = None

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise RuleValidationError("rule sides must be non-empty")
        if self.lhs & self.rhs:
            raise RuleValidationError("rule sides must be disjoint")
        els = self.lhs | self.rhs
        attrs = {e.attribute for e in els}
        if len(attrs) != len(els):
            raise RuleValidationError(
                "rule contains two elements with the same attribute"
            )
        for e in els:
            if not e.attribute or not e.value:
                raise RuleValidationError(f"empty attribute or value in {e}")
        if not 0.0 <= self.support <= 1.0:
            raise RuleValidationError(f"support {self.support} outside [0, 1]")
        if self.lift < 0.0:
            raise RuleValidationError(f"negative lift {self.lift}")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "elements_key", tuple(sorted(els)))
        object.__setattr__(self, "attributes", frozenset(attrs))

    # set in __post_init__; declared for introspection
    elements: frozenset[Element] = field(init=False, compare=False, repr=False)
    elements_key: tuple[Element, ...] = field(init=False, compare=False, repr=False)
    attributes: frozenset[str] = field(init=False, compare=False, repr=False)

    def with_score(self, score: float) -> "Rule":
        return Rule(self.lhs, self.rhs, self.support, self.lift, score)


class RuleSet:
    """Ordered, deduplicated collection of rules.

    Deduplication is on (lhs, rhs), keeping the first occurrence.
    """

    def __init__(self, rules: Iterable[Rule]):
        seen: set[tuple[frozenset, frozenset]] = set()
        kept = []
        for r in rules:
            key = (r.lhs, r.rhs)
            if key in seen:
                continue
            seen.add(key)
            kept.append(r)
        self.rules: tuple[Rule, ...] = tuple(kept)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __getitem__(self, i: int) -> Rule:
        return self.rules[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, RuleSet) and self.rules == other.rules

    @cached_property
    def universe(self) -> frozenset[Element]:
        out: set[Element] = set()
        for r in self.rules:
            out |= r.elements
        return frozenset(out)

    @cached_property
    def tau(self) -> int:
        """Maximum rule length (element count); 0 for an empty set."""
        return max((len(r.elements) for r in self.rules), default=0)

    def map_scores(self, fn) -> "RuleSet":
        return RuleSet(r.with_score(fn(r)) for r in self.rules)


def mine_apriori(d: Dataset, min_support: float, max_len: int = 8) -> RuleSet:
    """All rules whose element set has support >= min_support.

    Frequent itemsets of size >= 2 are expanded into every non-trivial
    LHS/RHS partition; support and lift come from the dataset.  Itemset
    growth stops at max_len elements.
    """
    if d.n_rows == 0:
        raise DataError("cannot mine an empty dataset")
    if not 0.0 < min_support <= 1.0:
        raise ConfigError(f"min_support must be in (0, 1], got {min_support}")

    n = d.n_rows
    # bitmask per element over rows: fast joint-support via AND + popcount
    masks: dict[Element, int] = {}
    for i in range(n):
        for e in d.row_elements(i):
            masks[e] = masks.get(e, 0) | (1 << i)

    def sup(count: int) -> float:
        return count / n

    support_of: dict[tuple[Element, ...], float] = {}
    singles = sorted(e for e, m in masks.items() if sup(_popcount(m)) >= min_support)
    for e in singles:
        support_of[(e,)] = sup(_popcount(masks[e]))
    level = [((e,), masks[e]) for e in singles]
    frequent_sets: list[tuple[Element, ...]] = []

    size = 1
    while level and size < max_len:
        size += 1
        next_level = []
        index = {items: m for items, m in level}
        keys = sorted(index)
        for i, left in enumerate(keys):
            for right in keys[i + 1 :]:
                if left[:-1] != right[:-1]:
                    break  # keys sorted: no further join partners
                cand = left + (right[-1],)
                if right[-1].attribute in {e.attribute for e in left}:
                    continue
                # downward closure: all (size-1)-subsets must be frequent
                if any(
                    cand[:j] + cand[j + 1 :] not in index
                    for j in range(len(cand) - 2)
                ):
                    continue
                m = index[left] & masks[right[-1]]
                s = sup(_popcount(m))
                if s >= min_support:
                    support_of[cand] = s
                    next_level.append((cand, m))
                    frequent_sets.append(cand)
        level = next_level

    rules = []
    for items in frequent_sets:
        s_all = support_of[items]
        members = list(items)
        for lhs_size in range(1, len(members)):
            for lhs_sel in combinations(members, lhs_size):
                lhs = frozenset(lhs_sel)
                rhs = frozenset(members) - lhs
                s_lhs = support_of[tuple(sorted(lhs))]
                s_rhs = support_of[tuple(sorted(rhs))]
                rules.append(
                    Rule(lhs, rhs, s_all, s_all / (s_lhs * s_rhs))
                )
    return RuleSet(rules)


def _popcount(x: int) -> int:
    return x.bit_count()


def filter_by_lift(rs: RuleSet, threshold: float) -> RuleSet:
    """Keep rules whose lift deviates from independence by at least the
    threshold; negative associations are matched via 1/lift, and zero
    lift counts as infinitely negative association (kept)."""
    if threshold <= 1.0:
        raise ConfigError(f"lift threshold must be > 1, got {threshold}")

    def keep(r: Rule) -> bool:
        if r.lift == 0.0:
            return True
        return max(r.lift, 1.0 / r.lift) >= threshold

    return RuleSet(r for r in rs if keep(r))


def _element_to_json(e: Element) -> dict:
    return {"attr": e.attribute, "value": e.value}


def _side_from_json(record_no: int, side: str, raw) -> frozenset[Element]:
    if not isinstance(raw, list):
        raise RuleValidationError(f"record {record_no}: {side} must be a list")
    out = set()
    for item in raw:
        try:
            out.add(Element(str(item["attr"]), str(item["value"])))
        except (TypeError, KeyError):
            raise RuleValidationError(
                f"record {record_no}: malformed element in {side}: {item!r}"
            )
    return frozenset(out)


def save_rules(rs: RuleSet, path) -> None:
    """Write one JSON object per rule; element order within a side is
    canonical so identical rule sets serialize identically."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in rs:
            obj = {
                "lhs": [_element_to_json(e) for e in sorted(r.lhs)],
                "rhs": [_element_to_json(e) for e in sorted(r.rhs)],
                "support": r.support,
                "lift": r.lift,
            }
            if r.score is not None:
                obj["score"] = r.score
            fh.write(json.dumps(obj) + "\n")


def load_rules(path) -> RuleSet:
    """Inverse of save_rules; validation failures name the record."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        for record_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise RuleValidationError(f"record {record_no}: invalid JSON: {exc}")
            lhs = _side_from_json(record_no, "lhs", obj.get("lhs"))
            rhs = _side_from_json(record_no, "rhs", obj.get("rhs"))
            try:
                rules.append(
                    Rule(
                        lhs,
                        rhs,
                        float(obj.get("support", 0.0)),
                        float(obj.get("lift", 0.0)),
                        float(obj["score"]) if "score" in obj else None,
                    )
                )
            except RuleValidationError as exc:
                raise RuleValidationError(f"record {record_no}: {exc}")
    return RuleSet(rules)
