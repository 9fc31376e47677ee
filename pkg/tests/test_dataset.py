import pytest

from sharq import (
    ConfigError,
    Dataset,
    Element,
    ParseError,
    DataError,
    discretize,
    element_frequency,
    elements_of,
    load_dataset,
    sample_rows,
)


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadDataset:
    def test_demo_sample_shape(self, demo_dataset):
        assert len(demo_dataset.attributes) == 6
        assert demo_dataset.n_rows == 4

    def test_header_only_loads_empty(self, tmp_path):
        d = load_dataset(write(tmp_path, "a,b,c\n"))
        assert d.n_rows == 0
        assert d.attributes == ("a", "b", "c")
        with pytest.raises(DataError):
            element_frequency(d, Element("a", "x"))

    def test_wrong_arity_names_line(self, tmp_path):
        path = write(tmp_path, "a,b,c\n1,2,3\n4,5\n")
        with pytest.raises(ParseError, match="line 3"):
            load_dataset(path)

    def test_duplicate_header_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_dataset(write(tmp_path, "a,b,a\n1,2,3\n"))

    def test_empty_file_rejected(self, tmp_path):
        with pytest.raises(ParseError):
            load_dataset(write(tmp_path, ""))

    def test_custom_delimiter(self, tmp_path):
        d = load_dataset(write(tmp_path, "a;b\n1;2\n"), delimiter=";")
        assert d.rows == (("1", "2"),)


class TestDiscretize:
    def test_equal_width_labels_on_age_column(self):
        d = Dataset(("age",), (("25",), ("28",), ("29",), ("44",)))
        out = discretize(d, bins=2)
        col = out.column("age")
        assert set(col) == {"25.0-34.5", "34.5-44.0"}
        assert col == ("25.0-34.5", "25.0-34.5", "25.0-34.5", "34.5-44.0")

    def test_constant_column_single_bin(self):
        d = Dataset(("x",), (("5",), ("5",), ("5",)))
        out = discretize(d, bins=3)
        assert out.column("x") == ("5.0-5.0",) * 3

    def test_categorical_column_unchanged(self, demo_dataset):
        out = discretize(demo_dataset, bins=2)
        assert out.column("relationship") == demo_dataset.column("relationship")
        assert out.column("gender") == demo_dataset.column("gender")

    def test_idempotent_on_binned_columns(self):
        d = Dataset(("age",), (("25",), ("28",), ("29",), ("44",)))
        once = discretize(d, bins=2)
        twice = discretize(once, bins=2)
        assert once.rows == twice.rows

    def test_bins_below_two_rejected(self, demo_dataset):
        with pytest.raises(ConfigError):
            discretize(demo_dataset, bins=1)

    def test_missing_token_kept(self):
        d = Dataset(("x",), (("1",), ("",), ("3",)), missing_token="")
        out = discretize(d, bins=2)
        assert out.column("x")[1] == ""

    def test_negative_values_stay_non_numeric_after_binning(self):
        d = Dataset(("x",), (("-9",), ("-5",), ("-1",)))
        out = discretize(d, bins=2)
        assert out.rows == discretize(out, bins=2).rows

    def test_explicit_column_policy(self, demo_dataset):
        out = discretize(demo_dataset, bins=2, numeric_detection=("age",))
        assert out.column("educational-num") == demo_dataset.column("educational-num")
        assert set(out.column("age")) == {"25.0-34.5", "34.5-44.0"}


class TestSampleRows:
    def test_deterministic_under_seed(self, demo_dataset):
        a = sample_rows(demo_dataset, 2, seed=7)
        b = sample_rows(demo_dataset, 2, seed=7)
        assert a.rows == b.rows
        assert a.n_rows == 2

    def test_clamps_to_available_rows(self, demo_dataset):
        assert sample_rows(demo_dataset, 10, seed=0).n_rows == 4

    def test_cardinality_stable_across_seeds(self, demo_dataset):
        assert sample_rows(demo_dataset, 3, seed=1).n_rows == 3
        assert sample_rows(demo_dataset, 3, seed=2).n_rows == 3

    def test_sample_elements_subset_of_full(self, demo_dataset):
        for seed in range(5):
            sub = sample_rows(demo_dataset, 2, seed=seed)
            assert elements_of(sub) <= elements_of(demo_dataset)

    def test_size_below_one_rejected(self, demo_dataset):
        with pytest.raises(ConfigError):
            sample_rows(demo_dataset, 0, seed=0)


class TestElementFrequency:
    def test_gender_male_three_of_four(self, demo_dataset):
        assert element_frequency(demo_dataset, Element("gender", "Male")) == 0.75

    def test_absent_element_zero(self, demo_dataset):
        assert element_frequency(demo_dataset, Element("gender", "Other")) == 0.0

    def test_single_row_own_element_one(self):
        d = Dataset(("a",), (("x",),))
        assert element_frequency(d, Element("a", "x")) == 1.0

    def test_unknown_attribute_lookup_error(self, demo_dataset):
        with pytest.raises(KeyError):
            element_frequency(demo_dataset, Element("nope", "x"))

    def test_frequencies_sum_to_one_per_attribute(self, demo_dataset):
        for a in demo_dataset.attributes:
            total = sum(
                element_frequency(demo_dataset, Element(a, v))
                for v in demo_dataset.domains[a]
            )
            assert total == pytest.approx(1.0)


class TestElementsOf:
    def test_demo_sample_has_sixteen_elements(self, demo_dataset):
        # per-attribute value counts: 4 + 3 + 3 + 2 + 2 + 2
        assert len(elements_of(demo_dataset)) == 16

    def test_empty_dataset_empty_set(self):
        d = Dataset(("a", "b"), ())
        assert elements_of(d) == set()

    def test_one_row_k_attributes(self):
        d = Dataset(("a", "b", "c"), (("1", "2", "3"),))
        assert len(elements_of(d)) == 3
