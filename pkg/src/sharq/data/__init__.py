"""Bundled toy fixtures: a 4-row demographic sample and the 6-element
rule set built over it, used in documentation and smoke tests."""

from importlib import resources

from ..dataset import Dataset, load_dataset
from ..miner import RuleSet, load_rules


def _path(name: str):
    return resources.files(__package__) / name


def adult_sample() -> Dataset:
    """Four demographic rows over six attributes."""
    with resources.as_file(_path("adult_sample.csv")) as p:
        return load_dataset(p)


def example_rules() -> RuleSet:
    """Four rules over six elements with externally supplied scores."""
    with resources.as_file(_path("example_rules.jsonl")) as p:
        return load_rules(p)
