"""Atomic CSV output with stable float formatting."""

from __future__ import annotations

import csv
import os
import tempfile
from typing import Iterable, Mapping, Sequence


def format_value(v) -> str:
    """Floats render with 9 significant digits so regression diffs are
    stable at the comparison tolerance; everything else via str."""
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def atomic_write_csv(
    path, fieldnames: Sequence[str], rows: Iterable[Mapping]
) -> None:
    """Write the full file to a temp sibling, then rename into place;
    a failed run never leaves a partial artifact behind."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(fieldnames)
            for row in rows:
                writer.writerow([format_value(row[k]) for k in fieldnames])
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
