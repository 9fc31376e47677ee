"""Scikit-learn style estimator surface.

Thin stateful wrappers over the functional core, so the pieces compose
with get_params/set_params, cloning, and pipeline-style code: a
discretizer that fits bin edges and transforms datasets, a miner that
fits a rule set, and a scorer that fits indices over rules and exposes
per-element contribution scores.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_dataset, check_is_fitted
from .analysis import ScoreTable, build_score_table
from .approx import ApproxConfig, approx_sharq_multi
from .dataset import (
    Dataset,
    Element,
    assign_bin,
    bin_edges,
    bin_label,
    numeric_attributes,
)
from .errors import ConfigError
from .exact import DEFAULT_ORACLE_BUDGET, naive_sharq, sharq_star_multi
from .miner import RuleSet, filter_by_lift, mine_apriori
from .scoring import MeasureConfig, score_rules

METHODS = ("exact", "naive", "kernel", "mc", "antithetic", "stratified", "sobol")
_SCHEME_BY_METHOD = {
    "kernel": "kernel",
    "mc": "monte_carlo",
    "antithetic": "antithetic",
    "stratified": "stratified",
    "sobol": "sobol",
}


class Discretizer(BaseEstimator, TransformerMixin):
    """Equal-width binner for the numeric columns of a Dataset.

    fit learns per-column edges; transform rewrites values as "lo-hi"
    labels, leaving missing tokens and non-numeric columns untouched.
    """

    def __init__(self, bins: int = 4, numeric_detection="auto"):
        self.bins = bins
        self.numeric_detection = numeric_detection

    def fit(self, X: Dataset, y=None):
        X = check_dataset(X)
        if self.bins < 2:
            raise ConfigError(f"bins must be >= 2, got {self.bins}")
        self.edges_: dict[str, list[float]] = {}
        for a in numeric_attributes(X, self.numeric_detection):
            values = [
                float(v) for v in X.column(a) if v != X.missing_token
            ]
            if values:
                self.edges_[a] = bin_edges(values, self.bins)
        return self

    def transform(self, X: Dataset) -> Dataset:
        check_is_fitted(self, "edges_")
        X = check_dataset(X)
        rows = []
        positions = [
            (X._attr_pos[a], edges)
            for a, edges in self.edges_.items()
            if a in X._attr_pos
        ]
        for row in X.rows:
            out = list(row)
            for pos, edges in positions:
                if out[pos] == X.missing_token:
                    continue
                out[pos] = bin_label(edges, assign_bin(float(out[pos]), edges))
            rows.append(tuple(out))
        return Dataset(X.attributes, tuple(rows), missing_token=X.missing_token)


class AprioriMiner(BaseEstimator):
    """Mines, lift-filters, and scores a rule set from a dataset.

    After fit, rules_ holds the RuleSet with populated scores.
    """

    def __init__(
        self,
        min_support: float = 0.1,
        max_len: int = 8,
        lift_threshold: float | None = None,
        measure: str = "is",
    ):
        self.min_support = min_support
        self.max_len = max_len
        self.lift_threshold = lift_threshold
        self.measure = measure

    def fit(self, X: Dataset, y=None):
        X = check_dataset(X)
        rules = mine_apriori(X, self.min_support, self.max_len)
        if self.lift_threshold is not None:
            rules = filter_by_lift(rules, self.lift_threshold)
        self.rules_ = score_rules(rules, self.measure, X)
        return self


class SharqScorer(BaseEstimator):
    """Contribution scores of elements in the context of a rule set.

    fit takes a RuleSet (scores already populated, or populated here
    when a dataset is passed) and an optional element set, defaulting
    to the rule universe; scores_ and a ranked score_table_ follow.
    """

    def __init__(
        self,
        method: str = "exact",
        measure: str = "is",
        aggregator: str = "max",
        scale: float = 1.0,
        budget: int = 200,
        seed: int = 0,
        oracle_budget: int = DEFAULT_ORACLE_BUDGET,
        threads: int | None = None,
    ):
        self.method = method
        self.measure = measure
        self.aggregator = aggregator
        self.scale = scale
        self.budget = budget
        self.seed = seed
        self.oracle_budget = oracle_budget
        self.threads = threads

    def _measure_config(self) -> MeasureConfig:
        return MeasureConfig(self.measure, self.aggregator, self.scale)

    def fit(self, rules: RuleSet, elements=None, dataset: Dataset | None = None):
        if not isinstance(rules, RuleSet):
            raise TypeError(f"expected a RuleSet, got {type(rules).__name__}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        cfg = self._measure_config()
        rules = score_rules(rules, self.measure, dataset)
        element_set = sorted(set(elements) if elements is not None else rules.universe)
        if self.method == "exact":
            scores = sharq_star_multi(element_set, rules, cfg, threads=self.threads)
        elif self.method == "naive":
            scores = {
                e: naive_sharq(e, element_set, rules, cfg, self.oracle_budget)
                for e in element_set
            }
        else:
            acfg = ApproxConfig(
                scheme=_SCHEME_BY_METHOD[self.method],
                budget=self.budget,
                seed=self.seed,
            )
            scores = approx_sharq_multi(element_set, rules, cfg, acfg)
        self.elements_ = tuple(element_set)
        self.scores_ = scores
        self.score_table_ = build_score_table(scores, self.method, self.scale)
        return self

    def score_table(self) -> ScoreTable:
        check_is_fitted(self, "score_table_")
        return self.score_table_
