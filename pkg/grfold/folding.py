"""Foldable seeds of C[Gr(2r, n)] and the folding equations they produce.

The foldable seed is reached from the rectangles seed by running columns of
mutations from the top of each column.  Its mutable quiver is a square mesh
that is symmetric under the column reflection ``(i, j) -> (i, k - j)``; for
``k = 4`` identifying the X-coordinates of mirror vertices in the first and
third columns yields ``n - 5`` multiplicative relations among Plücker
coordinates.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from .errors import InvalidParametersError, StructuralError, UnsupportedEvaluationError
from .quiver import Monomial, Position, Quiver, x_coordinate
from .seeds import ExchangeRecord, Seed, apply_sequence, check_kn, initial_seed, vertex_id
from .tableaux import Tableau

LOGGER = logging.getLogger(__name__)

IndexTuple = Tuple[int, ...]


def reduce_index(index: int, n: int) -> int:
    """Map an integer to ``[1, n]`` modulo ``n``."""

    return (index - 1) % n + 1


@dataclass(frozen=True, order=True)
class PluckerSymbol:
    """Plücker coordinate with strictly increasing indices."""

    indices: IndexTuple

    def __post_init__(self) -> None:
        indices = tuple(int(index) for index in self.indices)
        if any(indices[pos] >= indices[pos + 1] for pos in range(len(indices) - 1)):
            raise StructuralError(f"Plücker indices {indices} are not strictly increasing")
        object.__setattr__(self, "indices", indices)

    @classmethod
    def of(cls, label: Tableau) -> "PluckerSymbol":
        if not label.is_single_column:
            raise UnsupportedEvaluationError(f"{label.to_rows()} is not a Plücker coordinate")
        return cls(label.column_entries())

    def to_tableau(self) -> Tableau:
        return Tableau.column(self.indices)

    def __str__(self) -> str:
        return "P" + ",".join(str(index) for index in self.indices).join("[]")


def canonical_symbol(indices: Sequence[int], n: int) -> Tuple[Optional[PluckerSymbol], int]:
    """Reduce indices modulo ``n`` and sort them.

    Returns the symbol together with the sign of the sorting permutation, or
    ``(None, 0)`` when an index repeats and the coordinate vanishes.
    """

    reduced = [reduce_index(index, n) for index in indices]
    if len(set(reduced)) != len(reduced):
        return None, 0
    inversions = sum(
        1
        for left in range(len(reduced))
        for right in range(left + 1, len(reduced))
        if reduced[left] > reduced[right]
    )
    return PluckerSymbol(tuple(sorted(reduced))), -1 if inversions % 2 else 1


@dataclass(frozen=True)
class EquationForm:
    """Multiplicative relation ``net_sign * prod(P^e) = 1`` over Plücker symbols.

    ``word`` holds both sides moved to one side; ``source`` records where the
    equation came from and does not take part in comparisons.
    """

    word: Monomial
    net_sign: int = 1
    source: str = field(default="", compare=False)

    @classmethod
    def from_sides(
        cls,
        lhs_numerator: Iterable[Sequence[int]],
        lhs_denominator: Iterable[Sequence[int]],
        rhs_numerator: Iterable[Sequence[int]],
        rhs_denominator: Iterable[Sequence[int]],
        n: int,
        source: str = "",
    ) -> "EquationForm":
        """Build ``lhs_num / lhs_den = rhs_num / rhs_den`` with cyclic indices."""

        exponents: Dict[PluckerSymbol, int] = {}
        sign = 1
        for factors, exponent in (
            (lhs_numerator, 1),
            (lhs_denominator, -1),
            (rhs_numerator, -1),
            (rhs_denominator, 1),
        ):
            for indices in factors:
                symbol, symbol_sign = canonical_symbol(indices, n)
                if symbol is None:
                    raise StructuralError(f"degenerate Plücker symbol {tuple(indices)} (n={n})")
                sign *= symbol_sign
                exponents[symbol] = exponents.get(symbol, 0) + exponent
        return cls(Monomial(exponents), sign, source)

    def inverse(self) -> "EquationForm":
        return EquationForm(self.word.inverse(), self.net_sign, self.source)

    def symbols(self) -> Set[PluckerSymbol]:
        return set(self.word)  # type: ignore[arg-type]

    def lhs(self) -> List[Tuple[PluckerSymbol, int]]:
        return sorted((symbol, exp) for symbol, exp in self.word.items() if exp > 0)  # type: ignore[misc]

    def rhs(self) -> List[Tuple[PluckerSymbol, int]]:
        return sorted((symbol, -exp) for symbol, exp in self.word.items() if exp < 0)  # type: ignore[misc]

    def evaluate(self, values: Mapping[PluckerSymbol, object]) -> Tuple[object, object]:
        """Evaluate ``(net_sign * prod lhs, prod rhs)`` on numeric Plücker values."""

        left: object = self.net_sign
        right: object = 1
        for symbol, exp in self.lhs():
            left = left * values[symbol] ** exp  # type: ignore[operator]
        for symbol, exp in self.rhs():
            right = right * values[symbol] ** exp  # type: ignore[operator]
        return left, right

    def to_dict(self) -> Dict[str, object]:
        return {
            "lhs": [[list(symbol.indices), exp] for symbol, exp in self.lhs()],
            "rhs": [[list(symbol.indices), exp] for symbol, exp in self.rhs()],
            "net_sign": self.net_sign,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, object]) -> "EquationForm":
        exponents: Dict[PluckerSymbol, int] = {}
        for indices, exp in payload.get("lhs", []):  # type: ignore[union-attr]
            exponents[PluckerSymbol(tuple(indices))] = int(exp)
        for indices, exp in payload.get("rhs", []):  # type: ignore[union-attr]
            exponents[PluckerSymbol(tuple(indices))] = -int(exp)
        return cls(
            Monomial(exponents),
            int(payload.get("net_sign", 1)),  # type: ignore[arg-type]
            str(payload.get("source", "")),
        )


def equations_equal(first: EquationForm, second: EquationForm) -> bool:
    """Equal as relations: same word or inverse word, same net sign."""

    if first.net_sign != second.net_sign:
        return False
    return first.word == second.word or first.word == second.word.inverse()


# ----------------------------------------------------------------------
# Schedules


class ScheduleVariant(str, Enum):
    """How the target of each column run shrinks from block to block."""

    UNIFORM = "uniform"
    LITERAL = "literal"


@dataclass(frozen=True)
class Schedule:
    """Mutation sequence with the ``(column, target)`` runs that produced it."""

    vertex_ids: Tuple[int, ...]
    runs: Tuple[Tuple[int, int], ...]
    variant: ScheduleVariant = ScheduleVariant.UNIFORM

    def __len__(self) -> int:
        return len(self.vertex_ids)

    def to_dict(self) -> Dict[str, object]:
        return {
            "vertex_ids": list(self.vertex_ids),
            "runs": [list(run) for run in self.runs],
            "variant": self.variant.value,
        }


def check_foldable(k: int, n: int) -> None:
    check_kn(k, n)
    if k % 2 or k < 4:
        raise InvalidParametersError(f"foldable seeds need k = 2r with r >= 2, got k={k}")


def column_run(column: int, target: int, k: int, n: int) -> List[int]:
    """Ids of ``(1, column), ..., (target, column)``; empty when ``target <= 0``."""

    return [vertex_id(row, column, k, n) for row in range(1, target + 1)]


def _uniform_rows(k: int, n: int) -> Iterable[List[Tuple[int, int]]]:
    top = n - k - 1
    block = 1
    while True:
        yield [(column, top - max(0, 2 * block - column + 1)) for column in range(k - 1, 0, -1)]
        block += 1


def _literal_rows(k: int, n: int) -> Iterable[List[Tuple[int, int]]]:
    top = n - k - 1
    for block in range(1, k // 2):
        yield [(column, top - max(0, 2 * block - column + 1)) for column in range(k - 1, 0, -1)]
    step = 1
    while True:
        yield [(column, top - (k - column - 1 + step)) for column in range(k - 1, 0, -1)]
        step += 1


def fold_schedule(
    k: int, n: int, variant: ScheduleVariant = ScheduleVariant.UNIFORM
) -> Schedule:
    """Column-run schedule leading to the foldable seed.

    Rows of runs are emitted until the first row in which every run is empty.
    """

    check_foldable(k, n)
    rows = _uniform_rows(k, n) if variant is ScheduleVariant.UNIFORM else _literal_rows(k, n)
    vertex_ids: List[int] = []
    runs: List[Tuple[int, int]] = []
    for row in rows:
        active = [(column, target) for column, target in row if target > 0]
        if not active:
            break
        for column, target in active:
            runs.append((column, target))
            vertex_ids.extend(column_run(column, target, k, n))
    LOGGER.debug("Gr(%d,%d) %s schedule: %d mutations", k, n, variant.value, len(vertex_ids))
    return Schedule(tuple(vertex_ids), tuple(runs), variant)


@dataclass(frozen=True)
class FoldResult:
    schedule: Schedule
    seed: Seed
    records: Tuple[ExchangeRecord, ...]
    diagnostics: Tuple[str, ...] = ()


def run_schedule(
    k: int, n: int, variant: ScheduleVariant = ScheduleVariant.UNIFORM
) -> FoldResult:
    """Apply the schedule to the rectangles seed and keep the trace."""

    schedule = fold_schedule(k, n, variant)
    diagnostics: List[str] = []
    seed, records = apply_sequence(initial_seed(k, n), schedule.vertex_ids, diagnostics)
    return FoldResult(schedule, seed, tuple(records), tuple(diagnostics))


def foldable_seed(k: int, n: int) -> Seed:
    """Foldable seed of C[Gr(k, n)], checked to be a symmetric square mesh."""

    seed = run_schedule(k, n).seed
    quiver = seed.quiver
    if not is_square_mesh(quiver):
        raise StructuralError(
            f"Gr({k},{n}) mutable quiver is not a square mesh: {mesh_defects(quiver)}"
        )
    if not has_column_reflection_symmetry(quiver):
        raise StructuralError(
            f"Gr({k},{n}) mutable quiver is not reflection symmetric: {symmetry_defects(quiver)}"
        )
    return seed


# ----------------------------------------------------------------------
# Label predictions


def _interval_set(first: int, last: int) -> List[int]:
    return list(range(first, last + 1))


def _symbol_from(values: Iterable[int], k: int, n: int) -> PluckerSymbol:
    reduced = sorted({reduce_index(value, n) for value in values})
    if len(reduced) != k:
        raise StructuralError(f"predicted indices {reduced} do not form a {k}-subset of [{n}]")
    return PluckerSymbol(tuple(reduced))


def _first_column(row: int, k: int, n: int) -> Tuple[int, int, int, int]:
    base = (n - k) // 2
    if row == 1:
        return base, base + k - 2, base + k, base + k
    if (n - k) % 2 == 0:
        shift, offset = row // 2, row % 2
        last = base + k + shift - 1 + offset
    else:
        if row == 2:
            return base, base + k - 2, base + k + 1, base + k + 1
        shift, offset = (row - 1) // 2, (row - 1) % 2
        last = base + k + shift + offset
    if base - shift > 1:
        return base - shift, base - shift + k - 2, last, last
    return 1, k - 1, k + row, k + row


def predicted_intervals(row: int, column: int, k: int, n: int) -> Tuple[int, int, int, int]:
    """Interval endpoints ``(a, b, c, d)`` of the predicted label ``[a,b] | [c,d]``."""

    vertex_id(row, column, k, n)
    a, b, c, d = _first_column(row, k, n)
    even = (n - k) % 2 == 0
    for step in range(2, column + 1):
        parity = (row + step + 1) % 2
        if (parity == 0) == even:
            b, c = b - 1, c - 1
        else:
            a, d = a + 1, d + 1
    return a, b, c, d


def predicted_label(row: int, column: int, k: int, n: int) -> PluckerSymbol:
    """Label the foldable seed carries at the mutable position ``(row, column)``."""

    a, b, c, d = predicted_intervals(row, column, k, n)
    return _symbol_from(_interval_set(a, b) + _interval_set(c, d), k, n)


def gr4_positions(row: int, n: int) -> Tuple[int, int]:
    """``(a, c)`` attached to a row of the Gr(4, n) foldable seed; ``c - a = row + 3``."""

    if n % 2 == 0:
        a = n // 2 - row // 2 - 2
        c = n // 2 + (row + 3) // 2
    else:
        a = (n - 1) // 2 - (row + 3) // 2
        c = (n - 1) // 2 + row // 2 + 2
    return a, c


def predicted_label_gr4(row: int, column: int, n: int) -> PluckerSymbol:
    if column not in (1, 3):
        raise InvalidParametersError(f"Gr(4,n) closed-form labels exist for columns 1 and 3, not {column}")
    if not 1 <= row <= n - 5:
        raise InvalidParametersError(f"row {row} outside [1, {n - 5}]")
    a, c = gr4_positions(row, n)
    if column == 1:
        return _symbol_from((a, a + 1, a + 2, c), 4, n)
    return _symbol_from((a + 1, c - 1, c, c + 1), 4, n)


# ----------------------------------------------------------------------
# Folding equations


def x_identification_equations(seed: Seed) -> List[EquationForm]:
    """Equate the X-coordinates at ``(i, 1)`` and ``(i, 3)`` for every row.

    Labels of the second column must cancel from each equation.
    """

    if seed.k != 4:
        raise InvalidParametersError(f"X-coordinate identification is defined for k=4, got k={seed.k}")
    n = seed.n
    quiver = seed.quiver
    symbols: Dict[int, PluckerSymbol] = {}
    signs: Dict[int, int] = {}
    for vertex, label in seed.labels.items():
        if not label.is_single_column:
            raise UnsupportedEvaluationError(f"{label.to_rows()} is not a Plücker coordinate")
        symbol, sign = canonical_symbol(label.column_entries(), n)
        if symbol is None:
            raise StructuralError(f"label at {vertex} has a repeated index")
        symbols[vertex], signs[vertex] = symbol, sign
    middle = {symbols[vertex_id(row, 2, 4, n)] for row in range(1, n - 4)}

    equations: List[EquationForm] = []
    for row in range(1, n - 4):
        left = x_coordinate(quiver, vertex_id(row, 1, 4, n))
        right = x_coordinate(quiver, vertex_id(row, 3, 4, n))
        net_sign = 1
        for vertex, exp in left.items() + right.items():
            net_sign *= signs[vertex] ** abs(exp)  # type: ignore[index]
        word = left.substitute(symbols) / right.substitute(symbols)
        equation = EquationForm(word, net_sign, f"row {row}")
        leftover = middle & equation.symbols()
        if leftover:
            raise StructuralError(
                f"row {row}: second-column labels {sorted(map(str, leftover))} did not cancel"
            )
        equations.append(equation)
    return equations


def closed_form_equation(a: int, c: int, n: int) -> EquationForm:
    return EquationForm.from_sides(
        [(a, a + 1, a + 2, c), (a - 1, a, a + 1, c + 1)],
        [(a - 1, a, a + 1, a + 2)],
        [(a + 1, c - 1, c, c + 1), (a, c, c + 1, c + 2)],
        [(c - 1, c, c + 1, c + 2)],
        n,
        source=f"a={reduce_index(a, n)},c={reduce_index(c, n)}",
    )


def constraint_equation(a: int, c: int, n: int) -> EquationForm:
    """Kinematic constraint at ``(a, c)`` with the common factor ``P[a,a+1,c,c+1]`` kept."""

    common = (a, a + 1, c, c + 1)
    return EquationForm.from_sides(
        [(a, a + 1, a + 2, c), (a - 1, a, a + 1, c + 1)],
        [(a - 1, a, a + 1, a + 2), common],
        [(a + 1, c - 1, c, c + 1), (a, c, c + 1, c + 2)],
        [(c - 1, c, c + 1, c + 2), common],
        n,
        source=f"constraint a={reduce_index(a, n)},c={reduce_index(c, n)}",
    )


def equation_for_last_position(n: int) -> EquationForm:
    """Relation produced by the bottom mutable row of the Gr(4, n) foldable seed."""

    return EquationForm.from_sides(
        [(1, 2, 3, n - 2), (1, 2, n - 1, n)],
        [(1, 2, 3, n)],
        [(2, n - 3, n - 2, n - 1), (1, n - 2, n - 1, n)],
        [(n - 3, n - 2, n - 1, n)],
        n,
        source="last row",
    )


def closed_form_pairs(n: int) -> List[Tuple[int, int]]:
    return [gr4_positions(index, n) for index in range(0, n - 5)]


def closed_form_equations(n: int) -> List[EquationForm]:
    """The ``n - 5`` folding equations of C[Gr(4, n)] in closed form."""

    if n < 6:
        raise InvalidParametersError(f"folding equations need n >= 6, got {n}")
    equations = [closed_form_equation(a, c, n) for a, c in closed_form_pairs(n)]

    wrap = closed_form_equation(n - 2, 1, n)
    last = equation_for_last_position(n)
    if not equations_equal(wrap, last):
        raise StructuralError(f"n={n}: wrap-around member differs from the last-row relation")
    if not any(equations_equal(last, equation) for equation in equations):
        raise StructuralError(f"n={n}: last-row relation missing from the closed forms")
    return equations


def match_equations(
    found: Sequence[EquationForm], expected: Sequence[EquationForm]
) -> Tuple[List[EquationForm], List[EquationForm]]:
    """Return ``(unmatched found, unmatched expected)`` under :func:`equations_equal`."""

    remaining = list(expected)
    unmatched: List[EquationForm] = []
    for equation in found:
        for idx, candidate in enumerate(remaining):
            if equations_equal(equation, candidate):
                del remaining[idx]
                break
        else:
            unmatched.append(equation)
    return unmatched, remaining


# ----------------------------------------------------------------------
# Quiver shape checks


def _mutable_grid(quiver: Quiver) -> Dict[Position, int]:
    grid: Dict[Position, int] = {}
    for vertex in quiver.vertices:
        if vertex.frozen:
            continue
        if vertex.pos is None:
            raise StructuralError(f"vertex {vertex.id} has no grid position")
        grid[vertex.pos] = vertex.id
    return grid


def mesh_defects(quiver: Quiver) -> List[str]:
    """Reasons why the mutable part is not an alternating square mesh."""

    grid = _mutable_grid(quiver)
    defects: List[str] = []

    for source, target, multiplicity in quiver.mutable_subquiver().arrows():
        (si, sj), (ti, tj) = quiver.vertex(source).pos, quiver.vertex(target).pos  # type: ignore[misc]
        if abs(si - ti) + abs(sj - tj) != 1:
            defects.append(f"non-grid arrow {(si, sj)}->{(ti, tj)}")
        if multiplicity != 1:
            defects.append(f"multiplicity {multiplicity} on {(si, sj)}->{(ti, tj)}")

    for (i, j), vertex in grid.items():
        for neighbour in ((i + 1, j), (i, j + 1)):
            if neighbour in grid and quiver.multiplicity(vertex, grid[neighbour]) == 0:
                defects.append(f"missing arrow between {(i, j)} and {neighbour}")

    orientation: Dict[Position, int] = {}
    for (i, j) in grid:
        corners = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)]
        if not all(corner in grid for corner in corners):
            continue
        ids = [grid[corner] for corner in corners]
        steps = [quiver.multiplicity(ids[pos], ids[(pos + 1) % 4]) for pos in range(4)]
        if all(step == 1 for step in steps):
            orientation[(i, j)] = 1
        elif all(step == -1 for step in steps):
            orientation[(i, j)] = -1
        else:
            defects.append(f"cell at {(i, j)} is not an oriented 4-cycle")

    for (i, j), sense in orientation.items():
        for neighbour in ((i + 1, j), (i, j + 1)):
            if orientation.get(neighbour) == sense:
                defects.append(f"cells {(i, j)} and {neighbour} share an orientation")
    return defects


def is_square_mesh(quiver: Quiver) -> bool:
    return not mesh_defects(quiver)


def symmetry_defects(quiver: Quiver) -> List[str]:
    grid = _mutable_grid(quiver)
    if not grid:
        return []
    mirror = max(j for _, j in grid) + 1
    defects: List[str] = []
    for (i, j), vertex in grid.items():
        image = (i, mirror - j)
        if image not in grid:
            defects.append(f"{(i, j)} has no mirror image")
            continue
        for (p, q), other in grid.items():
            other_image = (p, mirror - q)
            if other_image not in grid:
                continue
            if quiver.multiplicity(vertex, other) != quiver.multiplicity(
                grid[image], grid[other_image]
            ):
                defects.append(f"arrow {(i, j)}->{(p, q)} has no mirror")
    return defects


def has_column_reflection_symmetry(quiver: Quiver) -> bool:
    """True iff ``(i, j) -> (i, k - j)`` is an automorphism of the mutable part."""

    return not symmetry_defects(quiver)


# ----------------------------------------------------------------------
# Three-term Plücker relations


def _two_interval_splits(indices: Sequence[int], n: int) -> List[Tuple[int, int, int, int]]:
    """All ways to write ``indices`` as ``[a,b] | [c,d]`` with ``a <= b < c <= d < a + n``."""

    members = set(indices)
    size = len(members)
    splits: List[Tuple[int, int, int, int]] = []
    for a in members:
        for first_length in range(1, size):
            b = a + first_length - 1
            first = {reduce_index(value, n) for value in range(a, b + 1)}
            if not first <= members:
                continue
            rest = members - first
            second_length = len(rest)
            for start in range(b + 1, a + n - second_length + 1):
                second = {reduce_index(value, n) for value in range(start, start + second_length)}
                if second == rest:
                    splits.append((a, b, start, start + second_length - 1))
    return splits


def _interval_union(a: int, b: int, c: int, d: int, k: int, n: int) -> Optional[Tuple[int, ...]]:
    values = [reduce_index(value, n) for value in _interval_set(a, b) + _interval_set(c, d)]
    if len(values) != k or len(set(values)) != k:
        return None
    return tuple(sorted(values))


def _pair(first: Tuple[int, ...], second: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted((first, second)))


def is_three_term_plucker(record: ExchangeRecord, n: int) -> bool:
    """True iff the exchange is ``P[a,b|c,d] P[a+1,b+1|c+1,d+1] = ... + ...``.

    The right-hand side is ``P[a+1,b+1|c,d] P[a,b|c+1,d+1]`` plus
    ``P[a,b+1|c+1,d] P[a+1,b|c,d+1]`` for cyclic intervals.
    """

    labels = record.labels()
    if not all(label.is_single_column for label in labels):
        return False
    if len(record.in_labels) != 2 or len(record.out_labels) != 2:
        return False
    k = record.old_label.k
    exchanged = _pair(record.old_label.column_entries(), record.new_label.column_entries())
    terms = sorted(
        [
            _pair(record.in_labels[0].column_entries(), record.in_labels[1].column_entries()),
            _pair(record.out_labels[0].column_entries(), record.out_labels[1].column_entries()),
        ]
    )

    for label in labels:
        for a, b, c, d in _two_interval_splits(label.column_entries(), n):
            parts = [
                _interval_union(a, b, c, d, k, n),
                _interval_union(a + 1, b + 1, c + 1, d + 1, k, n),
                _interval_union(a + 1, b + 1, c, d, k, n),
                _interval_union(a, b, c + 1, d + 1, k, n),
                _interval_union(a, b + 1, c + 1, d, k, n),
                _interval_union(a + 1, b, c, d + 1, k, n),
            ]
            if any(part is None for part in parts):
                continue
            candidate = _pair(parts[0], parts[1])  # type: ignore[arg-type]
            candidate_terms = sorted(
                [_pair(parts[2], parts[3]), _pair(parts[4], parts[5])]  # type: ignore[arg-type]
            )
            if candidate == exchanged and candidate_terms == terms:
                return True
    return False


# ----------------------------------------------------------------------
# Comparison against reference data


@dataclass
class SeedComparison:
    """Differences between an engine seed and reference labels and arrows."""

    label_mismatches: List[Tuple[Position, IndexTuple, IndexTuple]] = field(default_factory=list)
    missing_arrows: List[Tuple[Position, Position]] = field(default_factory=list)
    extra_arrows: List[Tuple[Position, Position]] = field(default_factory=list)
    reversed_orientation: bool = False

    @property
    def matches(self) -> bool:
        return not (self.label_mismatches or self.missing_arrows or self.extra_arrows)

    def to_dict(self) -> Dict[str, object]:
        return {
            "matches": self.matches,
            "reversed_orientation": self.reversed_orientation,
            "label_mismatches": [
                {"pos": list(pos), "engine": list(found), "expected": list(expected)}
                for pos, found, expected in self.label_mismatches
            ],
            "missing_arrows": [[list(s), list(t)] for s, t in self.missing_arrows],
            "extra_arrows": [[list(s), list(t)] for s, t in self.extra_arrows],
        }


def arrow_positions(seed: Seed, include_frozen: bool = False) -> Set[Tuple[Position, Position]]:
    """Arrows as position pairs; frozen-mutable arrows only when ``include_frozen``."""

    quiver = seed.quiver if include_frozen else seed.quiver.mutable_subquiver()
    return {
        (quiver.vertex(source).pos, quiver.vertex(target).pos)  # type: ignore[misc]
        for source, target, _ in quiver.arrows()
    }


def compare_seeds(
    seed: Seed,
    labels: Mapping[Position, Sequence[int]],
    arrows: Iterable[Tuple[Position, Position]],
    include_frozen: bool = False,
) -> SeedComparison:
    """Compare labels exactly and arrows up to global reversal."""

    comparison = SeedComparison()
    for pos, expected in sorted(labels.items()):
        found = seed.label_at(pos).column_entries()
        if tuple(found) != tuple(expected):
            comparison.label_mismatches.append((pos, tuple(found), tuple(expected)))

    engine = arrow_positions(seed, include_frozen)
    reference = {(tuple(s), tuple(t)) for s, t in arrows}
    flipped = {(t, s) for s, t in reference}
    if engine != reference and engine == flipped:
        comparison.reversed_orientation = True
        reference = flipped
    comparison.missing_arrows = sorted(reference - engine)  # type: ignore[arg-type]
    comparison.extra_arrows = sorted(engine - reference)  # type: ignore[arg-type]
    return comparison


__all__ = [
    "EquationForm",
    "FoldResult",
    "PluckerSymbol",
    "Schedule",
    "ScheduleVariant",
    "SeedComparison",
    "arrow_positions",
    "canonical_symbol",
    "check_foldable",
    "closed_form_equation",
    "closed_form_equations",
    "closed_form_pairs",
    "column_run",
    "compare_seeds",
    "constraint_equation",
    "equation_for_last_position",
    "equations_equal",
    "fold_schedule",
    "foldable_seed",
    "gr4_positions",
    "has_column_reflection_symmetry",
    "is_square_mesh",
    "is_three_term_plucker",
    "match_equations",
    "mesh_defects",
    "predicted_intervals",
    "predicted_label",
    "predicted_label_gr4",
    "reduce_index",
    "run_schedule",
    "symmetry_defects",
    "x_identification_equations",
]
