import pytest

from sharq import Dataset, Element, Rule, RuleSet
from sharq.data import adult_sample, example_rules


@pytest.fixture(scope="session")
def demo_dataset() -> Dataset:
    """Four demographic rows over six attributes (bundled sample)."""
    return adult_sample()


@pytest.fixture(scope="session")
def demo_rules() -> RuleSet:
    """Four rules over six elements with externally supplied scores:
    1.05, 1.02, 1.05, 0.70; two elements share the age attribute and
    two share income."""
    return example_rules()


def el(attr: str, value: str) -> Element:
    return Element(attr, value)


@pytest.fixture(scope="session")
def two_rule_triple() -> tuple[list[Element], RuleSet]:
    """Three elements with distinct attributes; rules {e, f} scoring 2
    and {f, g} scoring 1."""
    e, f, g = el("A", "a"), el("B", "b"), el("C", "c")
    rules = RuleSet(
        [
            Rule(frozenset([e]), frozenset([f]), 0.5, 1.0, 2.0),
            Rule(frozenset([f]), frozenset([g]), 0.5, 1.0, 1.0),
        ]
    )
    return [e, f, g], rules
