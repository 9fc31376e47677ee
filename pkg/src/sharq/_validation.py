"""Input validation helpers shared by the estimator API and the CLI."""

from __future__ import annotations

from .dataset import Dataset, Element
from .errors import ConfigError


def check_dataset(X) -> Dataset:
    if not isinstance(X, Dataset):
        raise TypeError(f"expected a Dataset, got {type(X).__name__}")
    return X


def check_is_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise ConfigError(
            f"{type(estimator).__name__} is not fitted yet; call fit first"
        )


def parse_element(text: str) -> Element:
    """ATTR=VALUE selector syntax; the first '=' splits."""
    attr, sep, value = text.partition("=")
    if not sep or not attr or not value:
        raise ConfigError(f"bad element selector {text!r}, expected ATTR=VALUE")
    return Element(attr, value)


def parse_element_list(text: str) -> list[Element]:
    return [parse_element(part) for part in text.split(",") if part]
