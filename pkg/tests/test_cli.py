import csv
import json
import os

import pytest

from sharq.cli import main
from sharq.data import adult_sample, example_rules
from sharq import save_rules


@pytest.fixture()
def demo_csv(tmp_path):
    path = tmp_path / "demo.csv"
    d = adult_sample()
    with open(path, "w") as fh:
        fh.write(",".join(d.attributes) + "\n")
        for row in d.rows:
            fh.write(",".join(row) + "\n")
    return path


@pytest.fixture()
def demo_rules_file(tmp_path):
    path = tmp_path / "rules.jsonl"
    save_rules(example_rules(), path)
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestMine:
    def test_pipeline_produces_rules(self, demo_csv, tmp_path):
        out = tmp_path / "rules.jsonl"
        code = main(
            [
                "mine",
                "--input", str(demo_csv),
                "--bins", "2",
                "--support", "0.5",
                "--seed", "3",
                "--output", str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines
        for line in lines:
            obj = json.loads(line)
            assert obj["lhs"] and obj["rhs"]
            assert "score" in obj

    def test_rerun_is_bit_identical(self, demo_csv, tmp_path):
        args = [
            "mine",
            "--input", str(demo_csv),
            "--sample", "3",
            "--bins", "2",
            "--support", "0.3",
            "--seed", "11",
        ]
        out1, out2 = tmp_path / "r1.jsonl", tmp_path / "r2.jsonl"
        assert main(args + ["--output", str(out1)]) == 0
        assert main(args + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_bins_below_two_is_config_error(self, demo_csv, tmp_path):
        code = main(
            [
                "mine",
                "--input", str(demo_csv),
                "--bins", "1",
                "--output", str(tmp_path / "x.jsonl"),
            ]
        )
        assert code == 2

    def test_missing_input_is_data_error(self, tmp_path):
        code = main(
            [
                "mine",
                "--input", str(tmp_path / "absent.csv"),
                "--output", str(tmp_path / "x.jsonl"),
            ]
        )
        assert code == 3

    def test_lift_threshold_filters(self, demo_csv, tmp_path):
        loose, tight = tmp_path / "loose.jsonl", tmp_path / "tight.jsonl"
        base = ["mine", "--input", str(demo_csv), "--support", "0.4"]
        assert main(base + ["--output", str(loose)]) == 0
        assert main(base + ["--lift-threshold", "1.3", "--output", str(tight)]) == 0
        n_loose = len(loose.read_text().strip().splitlines())
        n_tight = len(tight.read_text().strip().splitlines())
        assert n_tight <= n_loose


class TestScore:
    def test_exact_all_elements(self, demo_rules_file, tmp_path):
        out = tmp_path / "scores.csv"
        code = main(
            [
                "score",
                "--rules", str(demo_rules_file),
                "--method", "exact",
                "--scale", "100",
                "--output", str(out),
            ]
        )
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 6
        assert rows[0]["rank"] == "1"
        by_el = {(r["attribute"], r["value"]): float(r["score"]) for r in rows}
        lowest = min(by_el.values())
        assert by_el[("relationship", "unmarried")] == lowest

    def test_single_element_selector(self, demo_rules_file, tmp_path):
        out = tmp_path / "one.csv"
        code = main(
            [
                "score",
                "--rules", str(demo_rules_file),
                "--elements", "relationship=unmarried",
                "--output", str(out),
            ]
        )
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 1
        assert rows[0]["attribute"] == "relationship"

    def test_unknown_element_is_config_error(self, demo_rules_file, tmp_path):
        code = main(
            [
                "score",
                "--rules", str(demo_rules_file),
                "--elements", "nope=missing",
                "--output", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 2

    def test_naive_over_budget_exits_four(self, tmp_path, capsys):
        # 14 two-value attributes: naive count 3^13 > 10^6
        from sharq import Element, Rule, RuleSet

        rules = []
        for i in range(0, 14, 2):
            for v in ("0", "1"):
                rules.append(
                    Rule(
                        frozenset([Element(f"a{i:02d}", v)]),
                        frozenset([Element(f"a{i + 1:02d}", v)]),
                        0.5,
                        1.0,
                        1.0,
                    )
                )
        path = tmp_path / "wide.jsonl"
        save_rules(RuleSet(rules), path)
        code = main(
            [
                "score",
                "--rules", str(path),
                "--method", "naive",
                "--output", str(tmp_path / "x.csv"),
            ]
        )
        assert code == 4
        assert "coalitions" in capsys.readouterr().err
        assert not (tmp_path / "x.csv").exists()

    def test_exhaustive_kernel_matches_exact_csv(self, demo_rules_file, tmp_path):
        exact_out = tmp_path / "exact.csv"
        kernel_out = tmp_path / "kernel.csv"
        base = ["score", "--rules", str(demo_rules_file)]
        assert main(base + ["--method", "exact", "--output", str(exact_out)]) == 0
        assert (
            main(
                base
                + [
                    "--method", "kernel",
                    "--budget", "1000000",
                    "--seed", "5",
                    "--output", str(kernel_out),
                ]
            )
            == 0
        )
        exact_rows = read_csv(exact_out)
        kernel_rows = read_csv(kernel_out)
        assert [r["value"] for r in exact_rows] == [r["value"] for r in kernel_rows]
        assert [r["score"] for r in exact_rows] == [r["score"] for r in kernel_rows]

    def test_naive_matches_exact_within_budget(self, demo_rules_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["score", "--rules", str(demo_rules_file)]
        assert main(base + ["--method", "exact", "--output", str(a)]) == 0
        assert main(base + ["--method", "naive", "--output", str(b)]) == 0
        assert [r["score"] for r in read_csv(a)] == [r["score"] for r in read_csv(b)]

    def test_scores_rerun_bit_identical(self, demo_rules_file, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = [
            "score",
            "--rules", str(demo_rules_file),
            "--method", "mc",
            "--budget", "3",
            "--seed", "17",
        ]
        assert main(args + ["--output", str(a)]) == 0
        assert main(args + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestBaseline:
    def test_itop_all_same_value(self, demo_rules_file, tmp_path):
        out = tmp_path / "itop.csv"
        code = main(
            [
                "baseline",
                "--rules", str(demo_rules_file),
                "--method", "itop",
                "--output", str(out),
            ]
        )
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 6
        assert {r["score"] for r in rows} == {"1.05"}

    def test_influence_all_zero(self, demo_rules_file, tmp_path):
        out = tmp_path / "infl.csv"
        code = main(
            [
                "baseline",
                "--rules", str(demo_rules_file),
                "--method", "influence",
                "--output", str(out),
            ]
        )
        assert code == 0
        assert {r["score"] for r in read_csv(out)} == {"0"}


class TestReport:
    def test_elements_report(self, demo_rules_file, demo_csv, tmp_path):
        out = tmp_path / "elements.csv"
        code = main(
            [
                "report", "elements",
                "--rules", str(demo_rules_file),
                "--data", str(demo_csv),
                "--output", str(out),
            ]
        )
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 6
        assert list(rows[0].keys()) == [
            "attribute",
            "value",
            "sharq",
            "normalized_sharq",
            "freq_pct",
            "n_rules_low",
            "n_rules_med",
            "n_rules_high",
        ]

    def test_rules_report_with_prune(self, demo_rules_file, demo_csv, tmp_path):
        full, pruned = tmp_path / "full.csv", tmp_path / "pruned.csv"
        base = [
            "report", "rules",
            "--rules", str(demo_rules_file),
            "--data", str(demo_csv),
        ]
        assert main(base + ["--output", str(full)]) == 0
        full_rows = read_csv(full)
        assert len(full_rows) == 4
        threshold = sorted(float(r["r_sharq"]) for r in full_rows)[2]
        assert main(base + ["--prune", str(threshold), "--output", str(pruned)]) == 0
        pruned_rows = read_csv(pruned)
        assert 0 < len(pruned_rows) < 4
        assert all(float(r["r_sharq"]) >= threshold for r in pruned_rows)

    def test_attributes_report(self, demo_rules_file, demo_csv, tmp_path):
        out = tmp_path / "attrs.csv"
        code = main(
            [
                "report", "attributes",
                "--rules", str(demo_rules_file),
                "--data", str(demo_csv),
                "--output", str(out),
            ]
        )
        assert code == 0
        rows = read_csv(out)
        assert {r["attribute"] for r in rows} == {
            "age",
            "hours-per-week",
            "income",
            "relationship",
        }


class TestBench:
    def test_counting_suite_writes_csv(self, tmp_path):
        out = tmp_path / "bench"
        code = main(
            [
                "bench",
                "--suite", "coalitions",
                "--seed", "5",
                "--instances", "1",
                "--attributes", "5",
                "--values", "2",
                "--rules-count", "10",
                "--tau", "3",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = read_csv(out / "coalitions.csv")
        assert rows
        assert all(
            int(r["optimized_count"]) <= int(r["bound_rules_tau"]) for r in rows
        )

    def test_infeasible_tau_is_config_error(self, tmp_path):
        code = main(
            [
                "bench",
                "--suite", "coalitions",
                "--attributes", "3",
                "--tau", "5",
                "--out", str(tmp_path / "b"),
            ]
        )
        assert code == 2


class TestConfigFile:
    def test_config_mirrors_flags_and_flags_override(
        self, demo_rules_file, tmp_path
    ):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# scoring defaults\n"
            f"rules={demo_rules_file}\n"
            "method=exact\n"
            "scale=100\n"
        )
        out1, out2 = tmp_path / "c1.csv", tmp_path / "c2.csv"
        assert main(["score", "--config", str(cfg), "--output", str(out1)]) == 0
        assert (
            main(
                [
                    "score",
                    "--config", str(cfg),
                    "--scale", "1",
                    "--output", str(out2),
                ]
            )
            == 0
        )
        s1 = float(read_csv(out1)[0]["score"])
        s2 = float(read_csv(out2)[0]["score"])
        assert s1 == pytest.approx(100 * s2)
