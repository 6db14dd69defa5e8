"""Seeds of the Grassmannian cluster algebra C[Gr(k, n)].

Vertices of the initial seed sit on the grid ``{(0, 0)} | [n-k] x [k]``.
Mutable vertices are numbered column-major, ``id(i, j) = (j-1)(n-k-1) + i``;
frozen vertices follow in the order ``(0, 0)``, column ``k`` top-down and the
bottom row left-to-right.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy

from .errors import (
    GrFoldError,
    IncomparableError,
    InvalidMutationError,
    InvalidParametersError,
    SamplingError,
    SequenceError,
    ShapeMismatchError,
    StructuralError,
    UnsupportedEvaluationError,
)
from .quiver import Arrow, Position, Quiver, Vertex, max_multiplicity, mutate_quiver
from .tableaux import Tableau, max_dominance, quotient, union_all

LOGGER = logging.getLogger(__name__)

RationalMatrix = sympy.Matrix


def check_kn(k: int, n: int) -> None:
    if not 2 <= k <= n - 2:
        raise InvalidParametersError(f"Gr({k},{n}) needs 2 <= k <= n-2")


def vertex_id(i: int, j: int, k: int, n: int) -> int:
    """Column-major id of the mutable vertex ``(i, j)``."""

    if not (1 <= i <= n - k - 1 and 1 <= j <= k - 1):
        raise InvalidParametersError(f"({i},{j}) is not a mutable position of Gr({k},{n})")
    return (j - 1) * (n - k - 1) + i


def position_of(vertex: int, k: int, n: int) -> Position:
    rows = n - k - 1
    if not 1 <= vertex <= rows * (k - 1):
        raise InvalidParametersError(f"{vertex} is not a mutable vertex id of Gr({k},{n})")
    return ((vertex - 1) % rows + 1, (vertex - 1) // rows + 1)


def grid_positions(k: int, n: int) -> List[Tuple[Position, bool]]:
    """All positions in id order with their frozen flag."""

    check_kn(k, n)
    positions: List[Tuple[Position, bool]] = [
        ((i, j), False) for j in range(1, k) for i in range(1, n - k)
    ]
    positions.append(((0, 0), True))
    positions.extend(((a, k), True) for a in range(1, n - k + 1))
    positions.extend(((n - k, b), True) for b in range(1, k))
    return positions


def initial_label(a: int, b: int, k: int, n: int) -> Tableau:
    """Label at ``(a, b)``: ``{1..k-b} | {k-b+a+1..k+a}``; ``(0, 0)`` carries ``{1..k}``."""

    check_kn(k, n)
    if (a, b) == (0, 0):
        return Tableau.column(range(1, k + 1))
    if not (1 <= a <= n - k and 1 <= b <= k):
        raise InvalidParametersError(f"({a},{b}) is not a vertex of the initial Gr({k},{n}) quiver")
    return Tableau.column(list(range(1, k - b + 1)) + list(range(k - b + a + 1, k + a + 1)))


@dataclass(frozen=True)
class Seed:
    """A quiver together with a tableau label at every vertex."""

    k: int
    n: int
    quiver: Quiver
    labels: Mapping[int, Tableau] = field(default_factory=dict)

    def __post_init__(self) -> None:
        labels = dict(self.labels)
        object.__setattr__(self, "labels", MappingProxyType(labels))
        missing = [vertex for vertex in self.quiver.ids if vertex not in labels]
        if missing:
            raise StructuralError(f"vertices without labels: {missing}")
        for vertex, label in labels.items():
            if label.k != self.k:
                raise StructuralError(f"label at {vertex} has {label.k} rows, expected {self.k}")
            if any(not 1 <= entry <= self.n for entry in label.entries()):
                raise StructuralError(f"label at {vertex} has entries outside [1, {self.n}]")

    @property
    def mutable_ids(self) -> List[int]:
        return self.quiver.mutable_ids

    def label(self, vertex: int) -> Tableau:
        return self.labels[vertex]

    def label_at(self, pos: Position) -> Tableau:
        return self.labels[self.quiver.vertex_at(pos)]

    def position(self, vertex: int) -> Optional[Position]:
        return self.quiver.vertex(vertex).pos

    def single_column_violations(self) -> List[int]:
        return [vertex for vertex, label in self.labels.items() if not label.is_single_column]

    def __hash__(self) -> int:
        return hash((self.k, self.n, self.quiver, frozenset(self.labels.items())))


@dataclass(frozen=True)
class ExchangeRecord:
    """One mutation step: ``new * old = prod(in_labels) + prod(out_labels)``."""

    vertex: int
    old_label: Tableau
    new_label: Tableau
    in_labels: Tuple[Tableau, ...]
    out_labels: Tuple[Tableau, ...]

    def labels(self) -> List[Tableau]:
        return [self.old_label, self.new_label, *self.in_labels, *self.out_labels]

    def swapped(self) -> "ExchangeRecord":
        return ExchangeRecord(
            self.vertex, self.old_label, self.new_label, self.out_labels, self.in_labels
        )


def initial_seed(k: int, n: int) -> Seed:
    """Rectangles seed of C[Gr(k, n)]."""

    positions = grid_positions(k, n)
    ids = {pos: idx + 1 for idx, (pos, _) in enumerate(positions)}
    vertices = [Vertex(ids[pos], pos, frozen) for pos, frozen in positions]

    arrows: List[Arrow] = [(ids[(0, 0)], ids[(1, 1)], 1)]
    arrows += [
        (ids[(a - 1, b)], ids[(a, b)], 1) for a in range(2, n - k + 1) for b in range(1, k + 1)
    ]
    arrows += [
        (ids[(a, b - 1)], ids[(a, b)], 1) for a in range(1, n - k + 1) for b in range(2, k + 1)
    ]
    arrows += [
        (ids[(a + 1, b + 1)], ids[(a, b)], 1) for a in range(1, n - k) for b in range(1, k)
    ]

    labels = {ids[pos]: initial_label(pos[0], pos[1], k, n) for pos, _ in positions}
    return Seed(k, n, Quiver.from_arrows(vertices, arrows), labels)


def seed_with_labels(seed: Seed, overrides: Mapping[Position, Iterable[int]]) -> Seed:
    """Copy of ``seed`` with single-column labels replaced at the given positions."""

    labels = dict(seed.labels)
    for pos, entries in overrides.items():
        labels[seed.quiver.vertex_at(pos)] = Tableau.column(sorted(entries))
    return Seed(seed.k, seed.n, seed.quiver, labels)


def _repeat(seed: Seed, neighbours: Sequence[Tuple[int, int]]) -> Tuple[Tableau, ...]:
    return tuple(seed.labels[vertex] for vertex, m in neighbours for _ in range(m))


def mutate_seed(seed: Seed, vertex: int) -> Tuple[Seed, ExchangeRecord]:
    """Mutate labels and quiver at ``vertex``.

    The new label is ``old^-1 * max(U_in, U_out)`` where the unions run over
    the labels at the tails of incoming and the heads of outgoing arrows,
    counted with multiplicity.
    """

    quiver = seed.quiver
    if not quiver.has_vertex(vertex) or quiver.is_frozen(vertex):
        raise InvalidMutationError(f"cannot mutate Gr({seed.k},{seed.n}) seed at vertex {vertex}")

    in_labels = _repeat(seed, quiver.in_arrows(vertex))
    out_labels = _repeat(seed, quiver.out_arrows(vertex))
    try:
        top = max_dominance(union_all(in_labels, seed.k), union_all(out_labels, seed.k))
    except ShapeMismatchError as exc:
        raise IncomparableError(f"unions at vertex {vertex} have different shapes: {exc}") from exc

    old = seed.labels[vertex]
    new = quotient(top, old)
    labels = dict(seed.labels)
    labels[vertex] = new
    LOGGER.debug("Mutated vertex %d: %s -> %s", vertex, old.to_rows(), new.to_rows())

    record = ExchangeRecord(vertex, old, new, in_labels, out_labels)
    return Seed(seed.k, seed.n, mutate_quiver(quiver, vertex), labels), record


def apply_sequence(
    seed: Seed,
    vertices: Sequence[int],
    diagnostics: Optional[List[str]] = None,
) -> Tuple[Seed, List[ExchangeRecord]]:
    """Mutate left to right and return the final seed with the full trace.

    When ``diagnostics`` is given, every step is checked for arrow
    multiplicities above one and for labels that stop being single columns;
    findings are appended to the list and logged as warnings.
    """

    records: List[ExchangeRecord] = []
    current = seed
    for step, vertex in enumerate(vertices):
        try:
            current, record = mutate_seed(current, vertex)
        except GrFoldError as exc:
            raise SequenceError(step, vertex, exc) from exc
        records.append(record)

        if diagnostics is not None:
            multiplicity = max_multiplicity(current.quiver)
            if multiplicity > 1:
                message = f"step {step}: arrow multiplicity {multiplicity} after mutating {vertex}"
                LOGGER.warning(message)
                diagnostics.append(message)
            if not record.new_label.is_single_column:
                message = f"step {step}: label at {vertex} is no longer a single column"
                LOGGER.warning(message)
                diagnostics.append(message)
    return current, records


def plucker_eval(matrix: RationalMatrix, indices: Sequence[int]) -> sympy.Expr:
    """Maximal minor of ``matrix`` on the listed (1-based) columns, in the listed order."""

    if len(indices) != matrix.rows:
        raise InvalidParametersError(
            f"expected {matrix.rows} column indices, got {len(indices)}"
        )
    if any(not 1 <= index <= matrix.cols for index in indices):
        raise InvalidParametersError(f"column indices {tuple(indices)} outside [1, {matrix.cols}]")
    columns = [index - 1 for index in indices]
    return matrix.extract(list(range(matrix.rows)), columns).det(method="bareiss")


def tableau_value(matrix: RationalMatrix, label: Tableau) -> sympy.Expr:
    if label.is_empty:
        return sympy.Integer(1)
    if not label.is_single_column:
        raise UnsupportedEvaluationError(
            f"numeric evaluation needs a single-column label, got {label.to_rows()}"
        )
    return plucker_eval(matrix, label.column_entries())


def verify_exchange(record: ExchangeRecord, matrix: RationalMatrix) -> bool:
    """Exact check of ``new * old = prod(in) + prod(out)`` at ``matrix``."""

    values: Dict[Tableau, sympy.Expr] = {}
    for label in record.labels():
        if label not in values:
            values[label] = tableau_value(matrix, label)
    lhs = values[record.new_label] * values[record.old_label]
    rhs = sympy.prod([values[label] for label in record.in_labels]) + sympy.prod(
        [values[label] for label in record.out_labels]
    )
    return sympy.expand(lhs - rhs) == 0


def random_integer_matrix(
    k: int,
    n: int,
    rng: np.random.Generator,
    entry_range: int = 9,
    resample_limit: int = 100,
) -> RationalMatrix:
    """Full-rank ``k x n`` integer matrix with entries in ``[-entry_range, entry_range]``."""

    for attempt in range(1, resample_limit + 1):
        matrix = sympy.Matrix(rng.integers(-entry_range, entry_range + 1, size=(k, n)).tolist())
        if matrix.rank() == k:
            return matrix
        LOGGER.debug("Rank-deficient sample on attempt %d", attempt)
    raise SamplingError("no full-rank integer matrix found", resample_limit, "rank")


def matrix_for_record(
    record: ExchangeRecord,
    k: int,
    n: int,
    rng: np.random.Generator,
    entry_range: int = 9,
    resample_limit: int = 100,
) -> RationalMatrix:
    """Random matrix at which every label of ``record`` is nonzero."""

    for attempt in range(1, resample_limit + 1):
        matrix = random_integer_matrix(k, n, rng, entry_range, resample_limit)
        if all(tableau_value(matrix, label) != 0 for label in set(record.labels())):
            return matrix
        LOGGER.debug("Vanishing label for vertex %d on attempt %d", record.vertex, attempt)
    raise SamplingError(
        f"no generic matrix found for the exchange at vertex {record.vertex}",
        resample_limit,
        "vanishing label",
    )


def verify_records(
    records: Sequence[ExchangeRecord],
    k: int,
    n: int,
    trials: int,
    rng: np.random.Generator,
    entry_range: int = 9,
    resample_limit: int = 100,
) -> List[Tuple[int, int]]:
    """Check every record on ``trials`` fresh matrices; return failing ``(step, trial)`` pairs."""

    if trials < 1:
        raise InvalidParametersError(f"exchange checks need at least one trial, got {trials}")
    failures: List[Tuple[int, int]] = []
    for step, record in enumerate(records):
        for trial in range(trials):
            matrix = matrix_for_record(record, k, n, rng, entry_range, resample_limit)
            if not verify_exchange(record, matrix):
                LOGGER.info("Exchange at step %d failed on trial %d", step, trial)
                failures.append((step, trial))
    return failures


__all__ = [
    "ExchangeRecord",
    "RationalMatrix",
    "Seed",
    "apply_sequence",
    "check_kn",
    "grid_positions",
    "initial_label",
    "initial_seed",
    "matrix_for_record",
    "position_of",
    "mutate_seed",
    "plucker_eval",
    "random_integer_matrix",
    "seed_with_labels",
    "tableau_value",
    "verify_exchange",
    "verify_records",
    "vertex_id",
]
