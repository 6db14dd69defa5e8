"""Published data for C[Gr(4, 9)] used as regression fixtures.

Labels are keyed by grid position.  Arrows are ``(source, target)`` position
pairs and are compared up to a global reversal.
"""
from __future__ import annotations

from typing import Dict, List, Tuple

from .folding import EquationForm
from .quiver import Position

GR49 = (4, 9)

# Mutation order printed alongside the foldable seed; differs from the
# uniform schedule only by commuting mutations.
GR49_PRINTED_ORDER: Tuple[int, ...] = (9, 10, 11, 12, 5, 6, 7, 9, 10, 1, 2, 5)
GR49_SCHEDULE: Tuple[int, ...] = (9, 10, 11, 12, 5, 6, 7, 1, 2, 9, 10, 5)

GR49_FOLDABLE_LABELS: Dict[Position, Tuple[int, ...]] = {
    (1, 1): (2, 3, 4, 6),
    (2, 1): (2, 3, 4, 7),
    (3, 1): (1, 2, 3, 7),
    (4, 1): (1, 2, 3, 8),
    (1, 2): (3, 4, 6, 7),
    (2, 2): (2, 3, 6, 7),
    (3, 2): (2, 3, 7, 8),
    (4, 2): (1, 2, 7, 8),
    (1, 3): (3, 5, 6, 7),
    (2, 3): (3, 6, 7, 8),
    (3, 3): (2, 6, 7, 8),
    (4, 3): (2, 7, 8, 9),
    (0, 0): (1, 2, 3, 4),
    (1, 4): (2, 3, 4, 5),
    (2, 4): (3, 4, 5, 6),
    (3, 4): (4, 5, 6, 7),
    (4, 4): (5, 6, 7, 8),
    (5, 4): (6, 7, 8, 9),
    (5, 1): (1, 2, 3, 9),
    (5, 2): (1, 2, 8, 9),
    (5, 3): (1, 7, 8, 9),
}

GR49_FOLDABLE_MUTABLE_ARROWS: List[Tuple[Position, Position]] = [
    ((1, 1), (1, 2)),
    ((1, 3), (1, 2)),
    ((1, 2), (2, 2)),
    ((2, 2), (2, 3)),
    ((2, 3), (1, 3)),
    ((2, 3), (3, 3)),
    ((3, 3), (3, 2)),
    ((3, 2), (2, 2)),
    ((2, 2), (2, 1)),
    ((2, 1), (1, 1)),
    ((2, 1), (3, 1)),
    ((3, 1), (3, 2)),
    ((3, 2), (4, 2)),
    ((4, 2), (4, 3)),
    ((4, 3), (3, 3)),
    ((4, 2), (4, 1)),
    ((4, 1), (3, 1)),
]

GR49_FOLDABLE_FROZEN_ARROWS: List[Tuple[Position, Position]] = [
    ((4, 3), (5, 3)),
    ((5, 4), (4, 3)),
    ((3, 3), (5, 4)),
    ((4, 4), (2, 3)),
    ((1, 3), (4, 4)),
    ((3, 4), (1, 3)),
    ((1, 1), (1, 4)),
    ((2, 4), (1, 1)),
    ((1, 2), (2, 4)),
    ((3, 1), (0, 0)),
    ((0, 0), (2, 1)),
    ((5, 1), (4, 1)),
    ((5, 2), (4, 2)),
    ((4, 1), (5, 2)),
]

# The drawn rectangles seed shows these two labels instead of the values
# given by the label formula ({1,2,3,6} and {1,3,4,5}).
GR49_DRAWN_INITIAL_LABELS: Dict[Position, Tuple[int, ...]] = {
    (2, 1): (1, 2, 5, 7),
    (1, 3): (2, 4, 5, 6),
}

GR49_FOLDING_CONDITIONS: List[Tuple[int, int]] = [(3, 6), (2, 6), (2, 7), (1, 7)]

# (lhs numerators, lhs denominator, rhs numerators, rhs denominator)
_GR49_RELATIONS = [
    ([(3, 4, 5, 6), (2, 3, 4, 7)], [(2, 3, 4, 5)], [(4, 5, 6, 7), (3, 6, 7, 8)], [(5, 6, 7, 8)]),
    ([(2, 3, 4, 6), (1, 2, 3, 7)], [(1, 2, 3, 4)], [(3, 5, 6, 7), (2, 6, 7, 8)], [(5, 6, 7, 8)]),
    ([(2, 3, 4, 7), (1, 2, 3, 8)], [(1, 2, 3, 4)], [(3, 6, 7, 8), (2, 7, 8, 9)], [(6, 7, 8, 9)]),
    ([(1, 2, 3, 7), (1, 2, 8, 9)], [(1, 2, 3, 9)], [(2, 6, 7, 8), (1, 7, 8, 9)], [(6, 7, 8, 9)]),
]


def gr49_conditions() -> List[EquationForm]:
    """The four Gr(4, 9) folding relations, written out index by index."""

    return [
        EquationForm.from_sides(*relation, n=9, source=f"a={a},c={c}")
        for relation, (a, c) in zip(_GR49_RELATIONS, GR49_FOLDING_CONDITIONS)
    ]


__all__ = [
    "GR49",
    "GR49_DRAWN_INITIAL_LABELS",
    "GR49_FOLDABLE_FROZEN_ARROWS",
    "GR49_FOLDABLE_LABELS",
    "GR49_FOLDABLE_MUTABLE_ARROWS",
    "GR49_FOLDING_CONDITIONS",
    "GR49_PRINTED_ORDER",
    "GR49_SCHEDULE",
    "gr49_conditions",
]
