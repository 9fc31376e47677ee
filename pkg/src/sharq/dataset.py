"""Relational datasets of attribute-value elements.

A dataset is a header plus rows of string values, one value per
attribute per row.  Elements, the (attribute, value) pairs, are the
atoms everything else in this package is built from.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, DataError, ParseError


class Element(NamedTuple):
    """An attribute-value pair; compares and sorts by (attribute, value)."""

    attribute: str
    value: str

    def __str__(self) -> str:
        return f"{self.attribute}={self.value}"


@dataclass
class Dataset:
    """Immutable-by-convention relational table with string values.

    Every row holds a value (possibly the missing token) for every
    attribute.  Do not mutate after construction; loaders and
    transformations always return new instances.
    """

    attributes: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    missing_token: str = ""

    def __post_init__(self):
        if len(set(self.attributes)) != len(self.attributes):
            raise ConfigError("duplicate attribute names in header")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.attributes):
                raise ParseError(
                    f"row {i + 1} has {len(row)} values, expected {len(self.attributes)}"
                )

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @cached_property
    def _attr_pos(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.attributes)}

    @cached_property
    def domains(self) -> dict[str, frozenset[str]]:
        """Observed value set per attribute."""
        cols: dict[str, set[str]] = {a: set() for a in self.attributes}
        for row in self.rows:
            for a, v in zip(self.attributes, row):
                cols[a].add(v)
        return {a: frozenset(vs) for a, vs in cols.items()}

    def column(self, attribute: str) -> tuple[str, ...]:
        pos = self._attr_pos.get(attribute)
        if pos is None:
            raise KeyError(f"unknown attribute: {attribute!r}")
        return tuple(row[pos] for row in self.rows)

    def row_elements(self, index: int) -> frozenset[Element]:
        return frozenset(
            Element(a, v) for a, v in zip(self.attributes, self.rows[index])
        )


def load_dataset(
    path, delimiter: str = ",", missing_token: str = ""
) -> Dataset:
    """Read a delimited UTF-8 file whose first record is the header.

    Raises ParseError naming the line on malformed rows and ConfigError
    on duplicate header names.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file, expected a header record")
        if len(set(header)) != len(header):
            raise ConfigError(f"{path}: duplicate attribute names in header")
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise ParseError(
                    f"{path}: line {lineno} has {len(record)} fields, "
                    f"expected {len(header)}"
                )
            rows.append(tuple(record))
    return Dataset(tuple(header), tuple(rows), missing_token=missing_token)


def _parse_number(value: str) -> float | None:
    try:
        return float(value)
    except ValueError:
        return None


def numeric_attributes(d: Dataset, policy="auto") -> tuple[str, ...]:
    """Attributes selected for binning under the given detection policy.

    "auto" picks columns whose every non-missing value parses as a
    number (and that have at least one such value); "none" picks
    nothing; an explicit iterable of attribute names is taken verbatim.
    """
    if policy == "none":
        return ()
    if policy == "auto":
        picked = []
        for a in d.attributes:
            values = [v for v in d.column(a) if v != d.missing_token]
            if values and all(_parse_number(v) is not None for v in values):
                picked.append(a)
        return tuple(picked)
    names = tuple(policy)
    for a in names:
        if a not in d.attributes:
            raise KeyError(f"unknown attribute: {a!r}")
    return names


def bin_edges(values: Sequence[float], bins: int) -> list[float]:
    """Equal-width edges over [min, max]; a constant column collapses
    to a single degenerate bin."""
    lo, hi = min(values), max(values)
    if lo == hi:
        return [lo, hi]
    width = (hi - lo) / bins
    return [lo + i * width for i in range(bins)] + [hi]


def bin_label(edges: Sequence[float], index: int) -> str:
    return f"{edges[index]:.1f}-{edges[index + 1]:.1f}"


def assign_bin(x: float, edges: Sequence[float]) -> int:
    """Bin index for x; the maximum lands in the last bin, values
    outside the fitted range clamp to the end bins."""
    n_bins = len(edges) - 1
    if n_bins <= 1:
        return 0
    lo, hi = edges[0], edges[-1]
    width = (hi - lo) / n_bins
    idx = int((x - lo) // width)
    return min(max(idx, 0), n_bins - 1)


def discretize(d: Dataset, bins: int, numeric_detection="auto") -> Dataset:
    """Replace numeric columns by equal-width bin labels of the form
    "lo-hi" (one decimal place).  Non-numeric columns and missing
    tokens are left untouched; deterministic for a fixed input.
    """
    if bins < 2:
        raise ConfigError(f"bins must be >= 2, got {bins}")
    targets = numeric_attributes(d, numeric_detection)
    if not targets:
        return d
    edges_by_attr: dict[str, list[float]] = {}
    for a in targets:
        values = [
            _parse_number(v) for v in d.column(a) if v != d.missing_token
        ]
        if any(v is None for v in values):
            raise DataError(f"attribute {a!r} has non-numeric values, cannot bin")
        if not values:
            continue
        edges_by_attr[a] = bin_edges(values, bins)
    new_rows = []
    for row in d.rows:
        out = list(row)
        for a, edges in edges_by_attr.items():
            pos = d._attr_pos[a]
            if out[pos] == d.missing_token:
                continue
            out[pos] = bin_label(edges, assign_bin(float(out[pos]), edges))
        new_rows.append(tuple(out))
    return Dataset(d.attributes, tuple(new_rows), missing_token=d.missing_token)


def sample_rows(d: Dataset, n: int, seed: int) -> Dataset:
    """Uniform sample of min(n, |rows|) rows without replacement,
    keeping the original row order; reproducible under seed."""
    if n < 1:
        raise ConfigError(f"sample size must be >= 1, got {n}")
    k = min(n, d.n_rows)
    if k == d.n_rows:
        return d
    rng = np.random.default_rng(seed)
    picked = sorted(rng.choice(d.n_rows, size=k, replace=False).tolist())
    return Dataset(
        d.attributes,
        tuple(d.rows[i] for i in picked),
        missing_token=d.missing_token,
    )


def element_frequency(d: Dataset, e: Element) -> float:
    """Fraction of rows whose value for e.attribute equals e.value."""
    if d.n_rows == 0:
        raise DataError("frequency is undefined on an empty dataset")
    column = d.column(e.attribute)
    return sum(1 for v in column if v == e.value) / d.n_rows


def elements_of(d: Dataset) -> set[Element]:
    """All (attribute, value) pairs occurring in the dataset."""
    out: set[Element] = set()
    for a in d.attributes:
        for v in d.domains[a]:
            out.add(Element(a, v))
    return out
