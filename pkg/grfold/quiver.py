"""Cluster quivers stored as skew-symmetric exchange matrices.

A :class:`Quiver` keeps its vertices in a fixed order and a signed integer
matrix ``b`` with ``b[u][v]`` equal to the number of arrows ``u -> v`` minus the
number of arrows ``v -> u``.  Arrows between two frozen vertices are never
stored.  Quivers are immutable; :func:`mutate_quiver` returns a new value.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from .errors import InvalidMutationError, StructuralError

LOGGER = logging.getLogger(__name__)

Position = Tuple[int, int]
Arrow = Tuple[int, int, int]


@dataclass(frozen=True)
class Vertex:
    """A quiver vertex with an optional ``(row, col)`` grid position."""

    id: int
    pos: Optional[Position] = None
    frozen: bool = False

    def to_dict(self) -> Dict[str, object]:
        return {
            "id": self.id,
            "pos": list(self.pos) if self.pos is not None else None,
            "frozen": self.frozen,
        }


class Quiver:
    """Finite quiver without loops or 2-cycles."""

    __slots__ = ("vertices", "_b", "_index", "_by_pos")

    def __init__(self, vertices: Sequence[Vertex], exchange: object) -> None:
        b = np.array(exchange, dtype=np.int64)
        size = len(vertices)
        if b.shape != (size, size):
            raise StructuralError(f"exchange matrix has shape {b.shape}, expected {(size, size)}")
        if not np.array_equal(b, -b.T):
            raise StructuralError("exchange matrix is not skew-symmetric")

        self.vertices: Tuple[Vertex, ...] = tuple(vertices)
        self._index: Dict[int, int] = {vertex.id: idx for idx, vertex in enumerate(self.vertices)}
        if len(self._index) != size:
            raise StructuralError("vertex ids must be unique")
        self._by_pos: Dict[Position, int] = {
            vertex.pos: vertex.id for vertex in self.vertices if vertex.pos is not None
        }

        frozen = np.array([vertex.frozen for vertex in self.vertices], dtype=bool)
        b[np.ix_(frozen, frozen)] = 0
        b.setflags(write=False)
        self._b = b

    # ------------------------------------------------------------------
    @classmethod
    def from_arrows(cls, vertices: Sequence[Vertex], arrows: Iterable[Arrow]) -> "Quiver":
        """Build a quiver from ``(source, target, multiplicity)`` triples.

        Repeated and opposite arrows are summed, so a 2-cycle cancels.
        """

        index = {vertex.id: idx for idx, vertex in enumerate(vertices)}
        b = np.zeros((len(vertices), len(vertices)), dtype=np.int64)
        for source, target, multiplicity in arrows:
            if source == target:
                raise StructuralError(f"loop at vertex {source}")
            u, v = index[source], index[target]
            b[u, v] += multiplicity
            b[v, u] -= multiplicity
        return cls(vertices, b)

    # ------------------------------------------------------------------
    @property
    def b(self) -> np.ndarray:
        return self._b

    @property
    def ids(self) -> List[int]:
        return [vertex.id for vertex in self.vertices]

    @property
    def mutable_ids(self) -> List[int]:
        return [vertex.id for vertex in self.vertices if not vertex.frozen]

    @property
    def frozen_ids(self) -> List[int]:
        return [vertex.id for vertex in self.vertices if vertex.frozen]

    def index(self, vertex_id: int) -> int:
        try:
            return self._index[vertex_id]
        except KeyError:
            raise InvalidMutationError(f"unknown vertex {vertex_id}") from None

    def vertex(self, vertex_id: int) -> Vertex:
        return self.vertices[self.index(vertex_id)]

    def vertex_at(self, pos: Position) -> int:
        try:
            return self._by_pos[tuple(pos)]  # type: ignore[index]
        except KeyError:
            raise InvalidMutationError(f"no vertex at position {tuple(pos)}") from None

    def has_vertex(self, vertex_id: int) -> bool:
        return vertex_id in self._index

    def is_frozen(self, vertex_id: int) -> bool:
        return self.vertex(vertex_id).frozen

    def multiplicity(self, source: int, target: int) -> int:
        """Signed number of arrows ``source -> target``."""

        return int(self._b[self.index(source), self.index(target)])

    # ------------------------------------------------------------------
    def arrows(self) -> List[Arrow]:
        """All arrows as ``(source, target, m)`` with ``m > 0``, in vertex order."""

        rows, cols = np.nonzero(self._b > 0)
        return [
            (self.vertices[u].id, self.vertices[v].id, int(self._b[u, v]))
            for u, v in zip(rows.tolist(), cols.tolist())
        ]

    def in_arrows(self, vertex_id: int) -> List[Tuple[int, int]]:
        column = self._b[:, self.index(vertex_id)]
        return [(self.vertices[u].id, int(m)) for u, m in enumerate(column.tolist()) if m > 0]

    def out_arrows(self, vertex_id: int) -> List[Tuple[int, int]]:
        row = self._b[self.index(vertex_id), :]
        return [(self.vertices[v].id, int(m)) for v, m in enumerate(row.tolist()) if m > 0]

    def subquiver(self, keep: Callable[[Vertex], bool]) -> "Quiver":
        selected = [idx for idx, vertex in enumerate(self.vertices) if keep(vertex)]
        vertices = [self.vertices[idx] for idx in selected]
        return Quiver(vertices, self._b[np.ix_(selected, selected)])

    def mutable_subquiver(self) -> "Quiver":
        return self.subquiver(lambda vertex: not vertex.frozen)

    def relabel(self, mapping: Mapping[int, int]) -> "Quiver":
        """Return the quiver with vertex ids renamed through ``mapping``."""

        vertices = [
            Vertex(mapping.get(vertex.id, vertex.id), vertex.pos, vertex.frozen)
            for vertex in self.vertices
        ]
        return Quiver(vertices, self._b)

    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        if set(self.vertices) != set(other.vertices):
            return False
        order = [other.index(vertex.id) for vertex in self.vertices]
        return bool(np.array_equal(self._b, other._b[np.ix_(order, order)]))

    def __hash__(self) -> int:
        return hash(frozenset(self.arrows()) | frozenset(self.vertices))

    def __repr__(self) -> str:
        return f"Quiver(vertices={len(self.vertices)}, arrows={len(self.arrows())})"

    def to_dict(self) -> Dict[str, object]:
        return {
            "vertices": [vertex.to_dict() for vertex in self.vertices],
            "arrows": [list(arrow) for arrow in self.arrows()],
        }


def mutate_quiver(quiver: Quiver, vertex_id: int) -> Quiver:
    """Mutate ``quiver`` at ``vertex_id``.

    For every path ``i -> v -> j`` an arrow ``i -> j`` is added, the arrows at
    ``v`` are reversed and the resulting 2-cycles cancel.  On the exchange
    matrix this is ``b'_ij = b_ij + (|b_iv| b_vj + b_iv |b_vj|) / 2`` away from
    ``v`` and ``b'_ij = -b_ij`` on row and column ``v``.
    """

    if not quiver.has_vertex(vertex_id):
        raise InvalidMutationError(f"unknown vertex {vertex_id}")
    if quiver.is_frozen(vertex_id):
        raise InvalidMutationError(f"vertex {vertex_id} is frozen")

    k = quiver.index(vertex_id)
    b = np.array(quiver.b, dtype=np.int64)
    column = b[:, k]
    row = b[k, :]
    mutated = b + (np.outer(np.abs(column), row) + np.outer(column, np.abs(row))) // 2
    mutated[k, :] = -row
    mutated[:, k] = -column
    LOGGER.debug("Mutated quiver at vertex %d", vertex_id)
    return Quiver(quiver.vertices, mutated)


def reverse_quiver(quiver: Quiver) -> Quiver:
    """Reverse every arrow."""

    return Quiver(quiver.vertices, -quiver.b)


def max_multiplicity(quiver: Quiver, mutable_only: bool = False) -> int:
    target = quiver.mutable_subquiver() if mutable_only else quiver
    if not target.vertices:
        return 0
    return int(np.abs(target.b).max())


class Monomial:
    """Laurent monomial stored as a map from variables to nonzero exponents."""

    __slots__ = ("_exponents",)

    def __init__(self, exponents: Optional[Mapping[Hashable, int]] = None) -> None:
        self._exponents: Dict[Hashable, int] = {
            key: int(value) for key, value in (exponents or {}).items() if value
        }

    @classmethod
    def one(cls) -> "Monomial":
        return cls()

    @property
    def exponents(self) -> Dict[Hashable, int]:
        return dict(self._exponents)

    def __getitem__(self, key: Hashable) -> int:
        return self._exponents.get(key, 0)

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self._exponents)

    def __len__(self) -> int:
        return len(self._exponents)

    def items(self) -> List[Tuple[Hashable, int]]:
        return list(self._exponents.items())

    def is_one(self) -> bool:
        return not self._exponents

    def __mul__(self, other: "Monomial") -> "Monomial":
        combined = dict(self._exponents)
        for key, value in other._exponents.items():
            combined[key] = combined.get(key, 0) + value
        return Monomial(combined)

    def inverse(self) -> "Monomial":
        return Monomial({key: -value for key, value in self._exponents.items()})

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return self * other.inverse()

    def substitute(self, mapping: Mapping[Hashable, Hashable]) -> "Monomial":
        """Rename variables; exponents of variables sent to the same key add up."""

        result: Dict[Hashable, int] = {}
        for key, value in self._exponents.items():
            target = mapping[key]
            result[target] = result.get(target, 0) + value
        return Monomial(result)

    def numerator(self) -> "Monomial":
        return Monomial({key: value for key, value in self._exponents.items() if value > 0})

    def denominator(self) -> "Monomial":
        return Monomial({key: -value for key, value in self._exponents.items() if value < 0})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._exponents == other._exponents

    def __hash__(self) -> int:
        return hash(frozenset(self._exponents.items()))

    def __repr__(self) -> str:
        return f"Monomial({self._exponents!r})"


def x_coordinate(quiver: Quiver, vertex_id: int) -> Monomial:
    """Cluster X-coordinate at a mutable vertex.

    Each in-neighbour ``u`` contributes ``+b[u][v]`` and each out-neighbour
    ``-|b[v][u]|``; the vertex itself never appears.
    """

    if quiver.is_frozen(vertex_id):
        raise InvalidMutationError(f"vertex {vertex_id} is frozen")
    column = quiver.b[:, quiver.index(vertex_id)]
    return Monomial(
        {quiver.vertices[u].id: int(m) for u, m in enumerate(column.tolist()) if m != 0}
    )


__all__ = [
    "Arrow",
    "Monomial",
    "Position",
    "Quiver",
    "Vertex",
    "max_multiplicity",
    "mutate_quiver",
    "reverse_quiver",
    "x_coordinate",
]
