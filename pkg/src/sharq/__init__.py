"""Shapley-based contribution scores for elements of association rule sets.

Quantifies how much each attribute-value pair contributes to the
aggregated interestingness of a mined rule set, exactly (naive oracle
and the optimized single- and multi-element algorithms) or by sampling,
plus the derived rule- and attribute-importance reports and a benchmark
harness.
"""

from .analysis import (
    ElementReportRow,
    ScoreRow,
    ScoreTable,
    a_sharq,
    build_score_table,
    element_report,
    i_top,
    influence,
    normalized_sharq,
    prune_rules,
    r_sharq,
    rank_map,
)
from .approx import (
    SCHEMES,
    ApproxConfig,
    approx_sharq,
    approx_sharq_multi,
    kernel_weight,
)
from .bench import (
    InstanceConfig,
    ScoreDistribution,
    avg_precision_at_10,
    generate_instance,
    precision_at_k,
    run_ablation_suite,
    run_approx_suite,
    run_counting_suite,
    run_runtime_suite,
    spearman,
)
from .dataset import (
    Dataset,
    Element,
    discretize,
    element_frequency,
    elements_of,
    load_dataset,
    sample_rows,
)
from .errors import (
    ConfigError,
    DataError,
    MeasureError,
    OracleBudgetError,
    ParseError,
    RuleValidationError,
    SharqError,
)
from .estimators import AprioriMiner, Discretizer, SharqScorer
from .exact import (
    AttributeCoalitionIndex,
    Coalition,
    CoalitionRulesIndex,
    CoalitionStats,
    build_indices,
    coalition_stats,
    count_naive_coalitions,
    make_coalition,
    naive_sharq,
    optimized_coalitions,
    shapley_weight,
    sharq_star_multi,
    sharq_star_single,
    valid_coalitions,
)
from .miner import Rule, RuleSet, filter_by_lift, load_rules, mine_apriori, save_rules
from .scoring import (
    AGGREGATORS,
    MEASURES,
    MeasureConfig,
    aggregate,
    confidence,
    is_score,
    lift,
    rule_score,
    score_rules,
    support,
)

__version__ = "0.1.0"

__all__ = [
    "AGGREGATORS",
    "ApproxConfig",
    "AprioriMiner",
    "AttributeCoalitionIndex",
    "Coalition",
    "CoalitionRulesIndex",
    "CoalitionStats",
    "ConfigError",
    "DataError",
    "Dataset",
    "Discretizer",
    "Element",
    "ElementReportRow",
    "InstanceConfig",
    "MEASURES",
    "MeasureConfig",
    "MeasureError",
    "OracleBudgetError",
    "ParseError",
    "Rule",
    "RuleSet",
    "RuleValidationError",
    "SCHEMES",
    "ScoreDistribution",
    "ScoreRow",
    "ScoreTable",
    "SharqError",
    "SharqScorer",
    "a_sharq",
    "aggregate",
    "approx_sharq",
    "approx_sharq_multi",
    "avg_precision_at_10",
    "build_indices",
    "build_score_table",
    "coalition_stats",
    "confidence",
    "count_naive_coalitions",
    "discretize",
    "element_frequency",
    "element_report",
    "elements_of",
    "filter_by_lift",
    "generate_instance",
    "i_top",
    "influence",
    "is_score",
    "kernel_weight",
    "lift",
    "load_dataset",
    "load_rules",
    "make_coalition",
    "mine_apriori",
    "naive_sharq",
    "normalized_sharq",
    "optimized_coalitions",
    "precision_at_k",
    "prune_rules",
    "r_sharq",
    "rank_map",
    "rule_score",
    "run_ablation_suite",
    "run_approx_suite",
    "run_counting_suite",
    "run_runtime_suite",
    "sample_rows",
    "save_rules",
    "score_rules",
    "shapley_weight",
    "sharq_star_multi",
    "sharq_star_single",
    "spearman",
    "support",
    "valid_coalitions",
]
