"""Semistandard Young tableau arithmetic used by the tableau mutation rule."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import accumulate
from typing import Iterable, List, Sequence, Tuple

from .errors import IncomparableError, NotAFactorError, ShapeMismatchError, TableauError


class Relation(str, Enum):
    """Outcome of comparing two tableaux in the dominance order."""

    LESS_EQ = "less_eq"
    GREATER_EQ = "greater_eq"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing sequence of nonnegative integers."""

    parts: Tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(part) for part in self.parts)
        if any(part < 0 for part in parts):
            raise TableauError(f"partition {parts} has a negative part")
        if any(parts[idx] < parts[idx + 1] for idx in range(len(parts) - 1)):
            raise TableauError(f"partition {parts} is not weakly decreasing")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def prefix_sums(self, length: int) -> List[int]:
        padded = list(self.parts) + [0] * max(0, length - len(self.parts))
        return list(accumulate(padded))

    def is_dominated_by(self, other: "Partition") -> bool:
        """``self <= other``: every prefix sum of ``self`` is at most that of ``other``."""

        length = max(len(self.parts), len(other.parts))
        return all(
            mine <= theirs
            for mine, theirs in zip(self.prefix_sums(length), other.prefix_sums(length))
        )


@dataclass(frozen=True)
class Tableau:
    """Tableau with ``k`` left-justified rows.

    Stored labels are rectangular; non-rectangular tableaux only arise from
    :func:`restrict`.  The empty rectangular tableau stands for the constant 1.
    """

    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(entry) for entry in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        _validate(rows)

    # ------------------------------------------------------------------
    @classmethod
    def column(cls, entries: Iterable[int]) -> "Tableau":
        """Single-column tableau; ``entries`` must be strictly increasing."""

        return cls(tuple((entry,) for entry in entries))

    @classmethod
    def empty(cls, k: int) -> "Tableau":
        return cls(tuple(() for _ in range(k)))

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def is_rectangular(self) -> bool:
        return len({len(row) for row in self.rows}) <= 1

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> Partition:
        return Partition(tuple(len(row) for row in self.rows))

    @property
    def is_empty(self) -> bool:
        return all(not row for row in self.rows)

    @property
    def is_single_column(self) -> bool:
        return self.is_rectangular and self.width == 1

    def column_entries(self) -> Tuple[int, ...]:
        if not self.is_single_column:
            raise TableauError(f"{self.to_rows()} is not a single column")
        return tuple(row[0] for row in self.rows)

    def entries(self) -> List[int]:
        return [entry for row in self.rows for entry in row]

    def to_rows(self) -> List[List[int]]:
        return [list(row) for row in self.rows]

    def __repr__(self) -> str:
        return f"Tableau({self.to_rows()})"


def _validate(rows: Sequence[Sequence[int]]) -> None:
    lengths = [len(row) for row in rows]
    if any(lengths[idx] < lengths[idx + 1] for idx in range(len(lengths) - 1)):
        raise TableauError(f"rows {list(map(list, rows))} are not left-justified")
    for row in rows:
        if any(row[idx] > row[idx + 1] for idx in range(len(row) - 1)):
            raise TableauError(f"row {list(row)} is not weakly increasing")
    for upper, lower in zip(rows, rows[1:]):
        if any(upper[col] >= lower[col] for col in range(len(lower))):
            raise TableauError(f"columns of {list(map(list, rows))} are not strictly increasing")


def _require_same_k(first: Tableau, second: Tableau) -> None:
    if first.k != second.k:
        raise ShapeMismatchError(f"row counts differ: {first.k} != {second.k}")


def _contains(big: Sequence[int], small: Sequence[int]) -> bool:
    return not (Counter(small) - Counter(big))


def union(first: Tableau, second: Tableau) -> Tableau:
    """Row-wise sorted multiset union."""

    _require_same_k(first, second)
    return Tableau(tuple(tuple(sorted(a + b)) for a, b in zip(first.rows, second.rows)))


def union_all(tableaux: Iterable[Tableau], k: int) -> Tableau:
    result = Tableau.empty(k)
    for tableau in tableaux:
        result = union(result, tableau)
    return result


def is_factor(candidate: Tableau, tableau: Tableau) -> bool:
    """True iff every row of ``candidate`` is a sub-multiset of the matching row."""

    if candidate.k != tableau.k:
        return False
    return all(_contains(big, small) for small, big in zip(candidate.rows, tableau.rows))


def quotient(tableau: Tableau, factor: Tableau) -> Tableau:
    """Remove ``factor`` from ``tableau`` row by row."""

    _require_same_k(tableau, factor)
    if not is_factor(factor, tableau):
        raise NotAFactorError(f"{factor.to_rows()} is not a factor of {tableau.to_rows()}")
    rows = []
    for big, small in zip(tableau.rows, factor.rows):
        rows.append(tuple(sorted((Counter(big) - Counter(small)).elements())))
    return Tableau(tuple(rows))


def restrict(tableau: Tableau, bound: int) -> Tableau:
    """Sub-tableau of the entries ``<= bound``."""

    return Tableau(tuple(tuple(entry for entry in row if entry <= bound) for row in tableau.rows))


def dominance_compare(first: Tableau, second: Tableau) -> Relation:
    """Compare two tableaux of equal shape in the dominance order.

    ``first <= second`` iff ``sh(first[i])`` is dominated by ``sh(second[i])``
    for every ``i`` up to the largest entry.
    """

    if first.shape != second.shape:
        raise ShapeMismatchError(
            f"shapes differ: {first.shape.parts} != {second.shape.parts}"
        )
    top = max(first.entries() + second.entries(), default=0)
    less_eq = greater_eq = True
    for bound in range(1, top + 1):
        mine = restrict(first, bound).shape
        theirs = restrict(second, bound).shape
        less_eq = less_eq and mine.is_dominated_by(theirs)
        greater_eq = greater_eq and theirs.is_dominated_by(mine)
        if not (less_eq or greater_eq):
            return Relation.INCOMPARABLE
    if less_eq and greater_eq:
        return Relation.EQUAL
    return Relation.LESS_EQ if less_eq else Relation.GREATER_EQ


def max_dominance(first: Tableau, second: Tableau) -> Tableau:
    """Larger of two comparable tableaux."""

    relation = dominance_compare(first, second)
    if relation is Relation.INCOMPARABLE:
        raise IncomparableError(
            f"{first.to_rows()} and {second.to_rows()} are incomparable in dominance order"
        )
    return second if relation is Relation.LESS_EQ else first


__all__ = [
    "Partition",
    "Relation",
    "Tableau",
    "dominance_compare",
    "is_factor",
    "max_dominance",
    "quotient",
    "restrict",
    "union",
    "union_all",
]
