"""Command-line pipeline: mine -> score -> report -> bench.

Every randomized path takes --seed and reproduces bit-identical
outputs; artifact files are written whole-or-not-at-all.  Exit codes:
0 success, 2 configuration error, 3 data or validation error, 4 naive
oracle over its coalition budget.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from ._csvio import atomic_write_csv
from ._validation import parse_element_list
from .analysis import (
    a_sharq,
    build_score_table,
    element_report,
    i_top,
    influence,
    min_element,
    normalized_sharq,
    prune_rules,
    r_sharq,
)
from .approx import SCHEMES, ApproxConfig, approx_sharq
from .bench import (
    InstanceConfig,
    ScoreDistribution,
    generate_instance,
    run_ablation_suite,
    run_approx_suite,
    run_counting_suite,
    run_runtime_suite,
)
from .dataset import discretize, elements_of, load_dataset, sample_rows
from .errors import (
    ConfigError,
    DataError,
    OracleBudgetError,
    RuleValidationError,
    SharqError,
)
from .estimators import SharqScorer
from .exact import naive_sharq, sharq_star_single
from .miner import RuleSet, filter_by_lift, load_rules, mine_apriori, save_rules
from .scoring import AGGREGATORS, MEASURES, MeasureConfig, score_rules

METHOD_CHOICES = ("exact", "naive", "kernel", "mc", "antithetic", "stratified", "sobol")


def _add_measure_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--measure", choices=MEASURES, default="is")
    p.add_argument("--aggregator", choices=AGGREGATORS, default="max")
    p.add_argument("--scale", type=float, default=1.0)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sharq",
        description="Element contribution scores for association rule sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine rules from a delimited dataset")
    p.add_argument("--config")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--missing-token", default="")
    p.add_argument("--sample", type=int, help="row sample size before mining")
    p.add_argument("--bins", type=int, help="equal-width bins for numeric columns")
    p.add_argument("--support", type=float, default=0.1)
    p.add_argument("--lift-threshold", type=float)
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    _add_measure_flags(p)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("score", help="contribution scores for elements")
    p.add_argument("--config")
    p.add_argument("--rules", required=True)
    p.add_argument("--data")
    p.add_argument("--elements", default="all", help="all or ATTR=VALUE[,...]")
    p.add_argument("--method", choices=METHOD_CHOICES, default="exact")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--oracle-budget", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=os.cpu_count())
    p.add_argument("--output", required=True)
    _add_measure_flags(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("baseline", help="generic contribution baselines")
    p.add_argument("--config")
    p.add_argument("--rules", required=True)
    p.add_argument("--data")
    p.add_argument("--method", choices=("itop", "influence"), default="itop")
    p.add_argument("--output", required=True)
    _add_measure_flags(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("report", help="element, rule, or attribute reports")
    p.add_argument("kind", choices=("elements", "rules", "attributes"))
    p.add_argument("--config")
    p.add_argument("--rules", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--prune", type=float, help="drop rules below this importance")
    p.add_argument("--output", required=True)
    _add_measure_flags(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("bench", help="benchmark suites over generated instances")
    p.add_argument("--config")
    p.add_argument(
        "--suite",
        choices=("coalitions", "runtime", "approx", "ablation"),
        required=True,
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--instances", type=int, default=3)
    p.add_argument("--attributes", type=int, default=6)
    p.add_argument("--values", type=int, default=3)
    p.add_argument("--rules-count", type=int, default=50)
    p.add_argument("--rows", type=int, default=40)
    p.add_argument("--min-len", type=int, default=2)
    p.add_argument("--tau", type=int, default=4)
    p.add_argument("--budget", type=float, default=0.1)
    p.add_argument("--schemes", default=",".join(SCHEMES))
    p.add_argument("--repetitions", type=int, default=5)
    p.set_defaults(func=cmd_bench)

    return parser


def _load_config_tokens(argv: list[str]) -> list[str]:
    """key=value files mirror the flags; real flags override because
    config tokens are injected right after the subcommand."""
    if "--config" not in argv:
        return []
    path = argv[argv.index("--config") + 1]
    tokens = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}: bad config line {raw.strip()!r}")
            tokens += [f"--{key.strip().replace('_', '-')}", value.strip()]
    return tokens


def _atomic_save_rules(rules: RuleSet, path: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    os.close(fd)
    try:
        save_rules(rules, tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_scored_rules(args) -> tuple[RuleSet, object]:
    rules = load_rules(args.rules)
    data = load_dataset(args.data) if getattr(args, "data", None) else None
    return score_rules(rules, args.measure, data), data


def cmd_mine(args) -> int:
    data = load_dataset(args.input, args.delimiter, args.missing_token)
    if args.sample is not None:
        data = sample_rows(data, args.sample, args.seed)
    if args.bins is not None:
        data = discretize(data, args.bins)
    rules = mine_apriori(data, args.support, args.max_len)
    if args.lift_threshold is not None:
        rules = filter_by_lift(rules, args.lift_threshold)
    rules = score_rules(rules, args.measure, data)
    _atomic_save_rules(rules, args.output)
    return 0


def _write_score_table(scores, method, scale, path) -> None:
    table = build_score_table(scores, method, scale)
    rows = [
        {
            "attribute": r.element.attribute,
            "value": r.element.value,
            "score": r.score,
            "rank": r.rank,
            "method": method,
        }
        for r in table.rows
    ]
    atomic_write_csv(path, ("attribute", "value", "score", "rank", "method"), rows)


def cmd_score(args) -> int:
    rules, data = _load_scored_rules(args)
    cfg = MeasureConfig(args.measure, args.aggregator, args.scale)
    universe = set(rules.universe)
    known = universe | (elements_of(data) if data is not None else set())
    if args.elements == "all":
        targets = sorted(universe)
        context = targets
    else:
        targets = parse_element_list(args.elements)
        unknown = [e for e in targets if e not in known]
        if unknown:
            raise ConfigError(
                f"elements not present in the rules or dataset: "
                f"{', '.join(map(str, unknown))}"
            )
        context = sorted(universe | set(targets))

    if args.method == "exact" and args.elements == "all":
        scorer = SharqScorer(
            method="exact",
            measure=args.measure,
            aggregator=args.aggregator,
            scale=args.scale,
            threads=args.threads,
        )
        scores = scorer.fit(rules, elements=context, dataset=data).scores_
    elif args.method == "exact":
        scores = {e: sharq_star_single(e, context, rules, cfg) for e in targets}
    elif args.method == "naive":
        scores = {
            e: naive_sharq(e, context, rules, cfg, args.oracle_budget)
            for e in targets
        }
    else:
        scheme = {"mc": "monte_carlo"}.get(args.method, args.method)
        acfg = ApproxConfig(scheme=scheme, budget=args.budget, seed=args.seed)
        scores = {e: approx_sharq(e, context, rules, cfg, acfg) for e in targets}
    _write_score_table(scores, args.method, args.scale, args.output)
    return 0


def cmd_baseline(args) -> int:
    rules, _ = _load_scored_rules(args)
    cfg = MeasureConfig(args.measure, args.aggregator, args.scale)
    elements = sorted(rules.universe)
    if args.method == "itop":
        scores = {e: i_top(e, rules) for e in elements}
    else:
        scores = {e: influence(e, rules, cfg) for e in elements}
    _write_score_table(scores, args.method, args.scale, args.output)
    return 0


def cmd_report(args) -> int:
    rules, data = _load_scored_rules(args)
    cfg = MeasureConfig(args.measure, args.aggregator, args.scale)
    elements = sorted(rules.universe)
    if args.kind == "elements":
        rows = [
            {
                "attribute": row.element.attribute,
                "value": row.element.value,
                "sharq": row.sharq,
                "normalized_sharq": row.normalized_sharq,
                "freq_pct": row.freq_pct,
                "n_rules_low": row.n_rules_low,
                "n_rules_med": row.n_rules_med,
                "n_rules_high": row.n_rules_high,
            }
            for row in element_report(elements, rules, cfg, data)
        ]
        atomic_write_csv(
            args.output,
            (
                "attribute",
                "value",
                "sharq",
                "normalized_sharq",
                "freq_pct",
                "n_rules_low",
                "n_rules_med",
                "n_rules_high",
            ),
            rows,
        )
        return 0

    norm = normalized_sharq(elements, rules, cfg, data)
    if args.kind == "rules":
        kept = rules
        if args.prune is not None:
            kept = prune_rules(rules, norm, args.prune)
        index_of = {(r.lhs, r.rhs): i + 1 for i, r in enumerate(rules)}
        rows = [
            {
                "rule_id": f"r{index_of[(r.lhs, r.rhs)]}",
                "score": r.score,
                "r_sharq": r_sharq(r, norm),
                "min_element": str(min_element(r, norm)),
            }
            for r in kept
        ]
        atomic_write_csv(
            args.output, ("rule_id", "score", "r_sharq", "min_element"), rows
        )
        return 0

    rows = []
    for attribute in sorted({e.attribute for e in elements}):
        value = a_sharq(attribute, elements, rules, norm)
        if value is None:
            continue
        participating = sum(
            1
            for e in elements
            if e.attribute == attribute and any(e in r.elements for r in rules)
        )
        rows.append(
            {
                "attribute": attribute,
                "a_sharq": value,
                "n_participating": participating,
            }
        )
    atomic_write_csv(args.output, ("attribute", "a_sharq", "n_participating"), rows)
    return 0


def cmd_bench(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    if args.tau > args.attributes:
        raise ConfigError(
            f"--tau {args.tau} exceeds --attributes {args.attributes}"
        )
    instances = [
        generate_instance(
            InstanceConfig(
                n_attributes=args.attributes,
                values_per_attribute=args.values,
                n_rules=args.rules_count,
                rule_length_range=(args.min_len, args.tau),
                score_distribution=ScoreDistribution(),
                n_rows=args.rows,
                seed=args.seed + i,
            )
        )
        for i in range(args.instances)
    ]
    out_path = os.path.join(args.out, f"{args.suite}.csv")
    if args.suite == "coalitions":
        rows = run_counting_suite(instances)
    elif args.suite == "runtime":
        rows = run_runtime_suite(instances, repetitions=args.repetitions)
    elif args.suite == "approx":
        rows = run_approx_suite(
            instances,
            schemes=tuple(s for s in args.schemes.split(",") if s),
            budgets=(args.budget,),
            seed=args.seed,
        )
    else:
        rows = run_ablation_suite(instances)
    if not rows:
        raise DataError(f"suite {args.suite} produced no rows")
    atomic_write_csv(out_path, tuple(rows[0].keys()), rows)
    return 0


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        config_tokens = _load_config_tokens(argv)
        if config_tokens:
            argv = argv[:1] + config_tokens + argv[1:]
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    except OracleBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DataError, RuleValidationError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SharqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
