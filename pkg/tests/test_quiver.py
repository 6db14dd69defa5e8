"""Tests for quiver storage, mutation and X-coordinates."""
import unittest

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grfold.errors import InvalidMutationError, StructuralError
from grfold.quiver import (
    Monomial,
    Quiver,
    Vertex,
    max_multiplicity,
    mutate_quiver,
    reverse_quiver,
    x_coordinate,
)


def path_quiver():
    vertices = [Vertex(1, (1, 1)), Vertex(2, (1, 2)), Vertex(3, (1, 3), frozen=True)]
    return Quiver.from_arrows(vertices, [(1, 2, 1), (2, 3, 1)])


class TestQuiver(unittest.TestCase):

    def test_from_arrows_builds_skew_matrix(self):
        quiver = path_quiver()
        self.assertEqual(quiver.multiplicity(1, 2), 1)
        self.assertEqual(quiver.multiplicity(2, 1), -1)
        self.assertTrue(np.array_equal(quiver.b, -quiver.b.T))

    def test_two_cycle_cancels(self):
        vertices = [Vertex(1), Vertex(2)]
        quiver = Quiver.from_arrows(vertices, [(1, 2, 1), (2, 1, 1)])
        self.assertEqual(quiver.arrows(), [])

    def test_loop_rejected(self):
        with self.assertRaises(StructuralError):
            Quiver.from_arrows([Vertex(1)], [(1, 1, 1)])

    def test_non_skew_matrix_rejected(self):
        with self.assertRaises(StructuralError):
            Quiver([Vertex(1), Vertex(2)], [[0, 1], [1, 0]])

    def test_frozen_frozen_arrows_are_dropped(self):
        vertices = [Vertex(1, frozen=True), Vertex(2, frozen=True)]
        quiver = Quiver.from_arrows(vertices, [(1, 2, 1)])
        self.assertEqual(quiver.arrows(), [])

    def test_mutation_adds_composite_arrow_and_reverses(self):
        mutated = mutate_quiver(path_quiver(), 2)
        self.assertEqual(sorted(mutated.arrows()), [(1, 3, 1), (2, 1, 1), (3, 2, 1)])

    def test_mutation_cancels_opposite_arrow(self):
        vertices = [Vertex(1), Vertex(2), Vertex(3)]
        triangle = Quiver.from_arrows(vertices, [(1, 2, 1), (2, 3, 1), (3, 1, 1)])
        mutated = mutate_quiver(triangle, 2)
        self.assertEqual(sorted(mutated.arrows()), [(2, 1, 1), (3, 2, 1)])

    def test_mutation_at_frozen_vertex_raises(self):
        with self.assertRaises(InvalidMutationError):
            mutate_quiver(path_quiver(), 3)

    def test_mutation_at_unknown_vertex_raises(self):
        with self.assertRaises(InvalidMutationError):
            mutate_quiver(path_quiver(), 42)

    def test_vertex_at_position(self):
        quiver = path_quiver()
        self.assertEqual(quiver.vertex_at((1, 2)), 2)
        with self.assertRaises(InvalidMutationError):
            quiver.vertex_at((5, 5))

    def test_equality_ignores_vertex_order(self):
        quiver = path_quiver()
        shuffled = Quiver.from_arrows(list(reversed(quiver.vertices)), quiver.arrows())
        self.assertEqual(quiver, shuffled)

    def test_reverse_and_multiplicity(self):
        quiver = path_quiver()
        self.assertEqual(sorted(reverse_quiver(quiver).arrows()), [(2, 1, 1), (3, 2, 1)])
        self.assertEqual(max_multiplicity(quiver), 1)
        self.assertEqual(max_multiplicity(quiver, mutable_only=True), 1)


def test_x_coordinate_signs():
    x = x_coordinate(path_quiver(), 2)
    assert x == Monomial({1: 1, 3: -1})


def test_x_coordinate_rejects_frozen():
    with pytest.raises(InvalidMutationError):
        x_coordinate(path_quiver(), 3)


def test_monomial_arithmetic():
    first = Monomial({"a": 2, "b": -1})
    second = Monomial({"b": -1, "c": 1})
    assert (first / second) == Monomial({"a": 2, "c": -1})
    assert (first * first.inverse()).is_one()
    assert first.numerator() == Monomial({"a": 2})
    assert first.denominator() == Monomial({"b": 1})
    assert first.substitute({"a": "x", "b": "x"}) == Monomial({"x": 1})


@st.composite
def random_quivers(draw):
    size = draw(st.integers(min_value=2, max_value=20))
    upper = draw(
        st.lists(
            st.integers(min_value=-2, max_value=2),
            min_size=size * (size - 1) // 2,
            max_size=size * (size - 1) // 2,
        )
    )
    b = np.zeros((size, size), dtype=np.int64)
    values = iter(upper)
    for u in range(size):
        for v in range(u + 1, size):
            b[u, v] = next(values)
            b[v, u] = -b[u, v]
    vertices = [Vertex(idx + 1) for idx in range(size)]
    vertex = draw(st.integers(min_value=1, max_value=size))
    return Quiver(vertices, b), vertex


@settings(max_examples=1000, deadline=None)
@given(random_quivers())
def test_mutation_is_an_involution(case):
    quiver, vertex = case
    assert mutate_quiver(mutate_quiver(quiver, vertex), vertex) == quiver


@settings(max_examples=1000, deadline=None)
@given(random_quivers())
def test_mutation_preserves_skew_symmetry(case):
    quiver, vertex = case
    mutated = mutate_quiver(quiver, vertex)
    assert np.array_equal(mutated.b, -mutated.b.T)


@settings(max_examples=1000, deadline=None)
@given(random_quivers())
def test_reversal_commutes_with_mutation(case):
    quiver, vertex = case
    assert mutate_quiver(reverse_quiver(quiver), vertex) == reverse_quiver(mutate_quiver(quiver, vertex))


@settings(max_examples=1000, deadline=None)
@given(random_quivers())
def test_reversal_inverts_x_coordinates(case):
    quiver, vertex = case
    assert x_coordinate(reverse_quiver(quiver), vertex) == x_coordinate(quiver, vertex).inverse()
