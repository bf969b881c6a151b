"""k-anonymity and l-diversity checks over tabular records.

Records are grouped into equivalence classes by their quasi-identifier
tuple (exact string equality after trimming surrounding whitespace). A
dataset is k-anonymous when every class has at least k rows, i.e. each row
is indistinguishable from at least k-1 others, and (distinct) l-diverse when
every class holds at least l distinct sensitive values.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyDataset, LocalPrivError


@dataclass(frozen=True)
class Dataset:
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    quasi: tuple[str, ...]
    sensitive: str

    def __post_init__(self):
        cols = tuple(self.columns)
        rows = tuple(tuple(str(v) for v in r) for r in self.rows)
        quasi = tuple(self.quasi)
        for i, r in enumerate(rows):
            if len(r) != len(cols):
                raise LocalPrivError(f"row {i} has {len(r)} cells, expected {len(cols)}")
        missing = [c for c in (*quasi, self.sensitive) if c not in cols]
        if missing:
            raise LocalPrivError(f"unknown columns: {missing}")
        if self.sensitive in quasi:
            raise LocalPrivError("sensitive column cannot also be a quasi-identifier")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "quasi", quasi)

    @classmethod
    def from_csv(cls, path, quasi: Sequence[str], sensitive: str) -> "Dataset":
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            try:
                header = next(reader)
            except StopIteration:
                raise EmptyDataset(f"{path}: no header row") from None
            rows = [r for r in reader if r]
        return cls(tuple(h.strip() for h in header), tuple(map(tuple, rows)),
                   tuple(quasi), sensitive)

    def _col(self, name: str) -> int:
        return self.columns.index(name)

    def quasi_key(self, i: int) -> tuple[str, ...]:
        return tuple(self.rows[i][self._col(q)].strip() for q in self.quasi)

    def sensitive_value(self, i: int) -> str:
        return self.rows[i][self._col(self.sensitive)].strip()


@dataclass(frozen=True)
class AnonymityReport:
    """Outcome of a k-anonymity or l-diversity check.

    ``value`` is the largest parameter for which the check passes (the
    smallest class size, or the smallest distinct sensitive count).
    ``violating_class`` is a worst class, given only when the check fails.
    """

    check: str
    parameter: int
    holds: bool
    value: int
    violating_class: tuple[int, ...] | None = None

    def to_dict(self) -> dict:
        key = "max_k" if self.check == "k-anonymity" else "max_l"
        return {
            "check": self.check,
            "parameter": self.parameter,
            "holds": self.holds,
            key: self.value,
            "violating_class": list(self.violating_class) if self.violating_class else None,
        }


def equivalence_classes(ds: Dataset) -> list[tuple[int, ...]]:
    """Row indices grouped by quasi-identifier tuple, in order of first appearance."""
    groups: dict[tuple[str, ...], list[int]] = {}
    for i in range(len(ds.rows)):
        groups.setdefault(ds.quasi_key(i), []).append(i)
    return [tuple(g) for g in groups.values()]


def _check(ds: Dataset, threshold: int, name: str, score) -> AnonymityReport:
    if threshold < 1:
        raise LocalPrivError(f"{name} parameter must be >= 1")
    if not ds.rows:
        raise EmptyDataset("dataset has no rows")
    classes = equivalence_classes(ds)
    scores = [score(cls) for cls in classes]
    worst = min(range(len(classes)), key=lambda i: scores[i])
    holds = scores[worst] >= threshold
    return AnonymityReport(name, threshold, holds, scores[worst],
                           None if holds else classes[worst])


def check_k_anonymity(ds: Dataset, k: int) -> AnonymityReport:
    return _check(ds, k, "k-anonymity", len)


def check_l_diversity(ds: Dataset, l: int) -> AnonymityReport:
    """Distinct l-diversity: each class needs ``l`` distinct sensitive values."""
    return _check(ds, l, "l-diversity",
                  lambda cls: len({ds.sensitive_value(i) for i in cls}))
