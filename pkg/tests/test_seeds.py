"""Tests for the rectangles seed, tableau mutation and exact exchange checks."""
import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from grfold.errors import InvalidMutationError, InvalidParametersError, SequenceError
from grfold.quiver import mutate_quiver
from grfold.seeds import (
    ExchangeRecord,
    apply_sequence,
    grid_positions,
    initial_label,
    initial_seed,
    mutate_seed,
    plucker_eval,
    position_of,
    random_integer_matrix,
    seed_with_labels,
    tableau_value,
    verify_exchange,
    verify_records,
    vertex_id,
)
from grfold.tableaux import Tableau


@pytest.fixture
def gr25():
    return initial_seed(2, 5)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestLayout:

    def test_vertex_ids_are_column_major(self):
        assert vertex_id(1, 1, 4, 9) == 1
        assert vertex_id(4, 1, 4, 9) == 4
        assert vertex_id(1, 2, 4, 9) == 5
        assert vertex_id(4, 3, 4, 9) == 12

    def test_position_inverts_vertex_id(self):
        for j in range(1, 4):
            for i in range(1, 5):
                assert position_of(vertex_id(i, j, 4, 9), 4, 9) == (i, j)

    def test_out_of_range_position(self):
        with pytest.raises(InvalidParametersError):
            vertex_id(5, 1, 4, 9)
        with pytest.raises(InvalidParametersError):
            position_of(13, 4, 9)

    def test_grid_order(self):
        positions = grid_positions(2, 5)
        assert positions[:2] == [((1, 1), False), ((2, 1), False)]
        assert positions[2] == ((0, 0), True)
        assert [pos for pos, _ in positions[3:]] == [(1, 2), (2, 2), (3, 2), (3, 1)]

    def test_invalid_grassmannian(self):
        with pytest.raises(InvalidParametersError):
            initial_seed(1, 5)
        with pytest.raises(InvalidParametersError):
            initial_seed(4, 5)


class TestInitialSeed:

    def test_labels(self):
        assert initial_label(0, 0, 4, 9).column_entries() == (1, 2, 3, 4)
        assert initial_label(1, 1, 4, 9).column_entries() == (1, 2, 3, 5)
        assert initial_label(2, 1, 4, 9).column_entries() == (1, 2, 3, 6)
        assert initial_label(1, 3, 4, 9).column_entries() == (1, 3, 4, 5)
        assert initial_label(5, 4, 4, 9).column_entries() == (6, 7, 8, 9)

    def test_sizes(self):
        seed = initial_seed(4, 9)
        assert len(seed.mutable_ids) == 12
        assert len(seed.quiver.frozen_ids) == 9
        assert seed.single_column_violations() == []

    def test_gr25_arrows(self, gr25):
        assert sorted(gr25.quiver.arrows()) == [
            (1, 2, 1),
            (1, 4, 1),
            (2, 5, 1),
            (2, 7, 1),
            (3, 1, 1),
            (5, 1, 1),
            (6, 2, 1),
        ]

    def test_gr49_labels_follow_rectangle_formula(self):
        k, n = 4, 9
        seed = initial_seed(k, n)
        positions = [pos for pos, _ in grid_positions(k, n)]
        assert len(positions) == 21
        for a, b in positions:
            if (a, b) == (0, 0):
                expected = tuple(range(1, k + 1))
            else:
                expected = tuple(range(1, k - b + 1)) + tuple(range(k - b + a + 1, k + a + 1))
            assert seed.label_at((a, b)).column_entries() == expected
        assert seed.label_at((5, 3)).column_entries() == (1, 7, 8, 9)

    def test_gr49_arrows_follow_the_four_families(self):
        k, n = 4, 9
        seed = initial_seed(k, n)
        frozen = {(0, 0)} | {(a, k) for a in range(1, n - k + 1)} | {(n - k, b) for b in range(1, k + 1)}
        families = {((0, 0), (1, 1))}
        families |= {((a - 1, b), (a, b)) for a in range(2, n - k + 1) for b in range(1, k + 1)}
        families |= {((a, b - 1), (a, b)) for a in range(1, n - k + 1) for b in range(2, k + 1)}
        families |= {((a + 1, b + 1), (a, b)) for a in range(1, n - k) for b in range(1, k)}
        assert len(families) == 1 + 16 + 15 + 12
        stored = {(tail, head) for tail, head in families if not (tail in frozen and head in frozen)}
        assert len(stored) == 37

        at = seed.quiver.vertex_at
        assert sorted(seed.quiver.arrows()) == sorted((at(tail), at(head), 1) for tail, head in stored)
        assert set(seed.quiver.frozen_ids) == {at(pos) for pos in frozen}

    def test_seed_with_labels(self, gr25):
        changed = seed_with_labels(gr25, {(1, 1): (5, 2)})
        assert changed.label_at((1, 1)).column_entries() == (2, 5)
        assert gr25.label_at((1, 1)).column_entries() == (1, 3)


class TestSeedValue:

    def test_equal_seeds_hash_alike(self, gr25):
        twin = initial_seed(2, 5)
        assert twin == gr25
        assert hash(twin) == hash(gr25)
        assert len({gr25, twin, mutate_seed(gr25, 1)[0]}) == 2

    def test_labels_are_read_only(self, gr25):
        with pytest.raises(TypeError):
            gr25.labels[1] = Tableau.column([2, 4])  # type: ignore[index]


class TestMutation:

    def test_gr25_exchange_is_three_term(self, gr25):
        mutated, record = mutate_seed(gr25, 1)
        assert record.old_label == Tableau.column([1, 3])
        assert record.new_label == Tableau.column([2, 4])
        assert mutated.label(1) == Tableau.column([2, 4])
        assert sorted(label.column_entries() for label in record.in_labels) == [(1, 2), (3, 4)]
        assert sorted(label.column_entries() for label in record.out_labels) == [(1, 4), (2, 3)]

    def test_frozen_vertex_rejected(self, gr25):
        with pytest.raises(InvalidMutationError):
            mutate_seed(gr25, 3)

    def test_sequence_error_reports_step(self, gr25):
        with pytest.raises(SequenceError) as excinfo:
            apply_sequence(gr25, [1, 2, 7])
        assert excinfo.value.step == 2
        assert excinfo.value.vertex == 7
        assert isinstance(excinfo.value.cause, InvalidMutationError)
        assert excinfo.value.to_dict()["cause"]["error"] == "InvalidMutationError"

    def test_diagnostics_stay_empty_on_plucker_sequences(self, gr25):
        diagnostics = []
        _, records = apply_sequence(gr25, [1, 2, 1], diagnostics)
        assert len(records) == 3
        assert diagnostics == []

    def test_gr49_first_exchange_is_three_term(self):
        mutated, record = mutate_seed(initial_seed(4, 9), 9)
        assert record.vertex == 9
        assert record.old_label == Tableau.column([1, 3, 4, 5])
        assert record.new_label == Tableau.column([2, 4, 5, 6])
        assert mutated.label_at((1, 3)) == Tableau.column([2, 4, 5, 6])
        sides = {
            tuple(sorted(label.column_entries() for label in record.in_labels)),
            tuple(sorted(label.column_entries() for label in record.out_labels)),
        }
        assert sides == {((1, 2, 4, 5), (3, 4, 5, 6)), ((1, 4, 5, 6), (2, 3, 4, 5))}
        assert verify_records([record], 4, 9, trials=5, rng=np.random.default_rng(9)) == []

    def test_gr49_quiver_mutation_by_hand(self):
        seed = initial_seed(4, 9)
        quiver = seed.quiver

        def by_position(q):
            return {(q.vertex(tail).pos, q.vertex(head).pos, m) for tail, head, m in q.arrows()}

        # in-neighbours (1,2), (2,4); out-neighbours (2,3), (1,4)
        expected = by_position(quiver)
        expected -= {
            ((1, 2), (1, 3), 1),
            ((2, 4), (1, 3), 1),
            ((1, 3), (2, 3), 1),
            ((1, 3), (1, 4), 1),
            ((2, 3), (1, 2), 1),
            ((2, 3), (2, 4), 1),
        }
        expected |= {
            ((1, 3), (1, 2), 1),
            ((1, 3), (2, 4), 1),
            ((2, 3), (1, 3), 1),
            ((1, 4), (1, 3), 1),
            ((1, 2), (1, 4), 1),
        }
        assert by_position(mutate_quiver(quiver, quiver.vertex_at((1, 3)))) == expected

    def test_swapped_record(self, gr25):
        _, record = mutate_seed(gr25, 1)
        swapped = record.swapped()
        assert swapped.in_labels == record.out_labels
        assert swapped.out_labels == record.in_labels


class TestExactEvaluation:

    def test_plucker_uses_listed_order(self):
        matrix = sympy.Matrix([[1, 2, 0], [0, 1, 3]])
        assert plucker_eval(matrix, (1, 2)) == 1
        assert plucker_eval(matrix, (2, 1)) == -1
        assert plucker_eval(matrix, (1, 3)) == 3

    def test_plucker_rejects_bad_indices(self):
        matrix = sympy.Matrix([[1, 2, 0], [0, 1, 3]])
        with pytest.raises(InvalidParametersError):
            plucker_eval(matrix, (1, 4))
        with pytest.raises(InvalidParametersError):
            plucker_eval(matrix, (1,))

    def test_empty_label_is_one(self):
        matrix = sympy.Matrix([[1, 2, 0], [0, 1, 3]])
        assert tableau_value(matrix, Tableau.empty(2)) == 1

    def test_wrong_exchange_is_detected(self, gr25, rng):
        _, record = mutate_seed(gr25, 1)
        broken = ExchangeRecord(
            record.vertex, record.old_label, Tableau.column([1, 5]), record.in_labels, record.out_labels
        )
        matrix = random_integer_matrix(2, 5, rng)
        assert verify_exchange(record, matrix)
        assert not verify_exchange(broken, matrix)

    def test_verify_records_needs_a_trial(self, gr25, rng):
        _, record = mutate_seed(gr25, 1)
        with pytest.raises(InvalidParametersError):
            verify_records([record], 2, 5, trials=0, rng=rng)

    def test_verify_records_on_gr36(self, rng):
        _, record = mutate_seed(initial_seed(3, 6), 1)
        assert record.new_label.is_single_column
        assert verify_records([record], 3, 6, trials=3, rng=rng) == []


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=6))
def test_gr26_random_sequences_satisfy_exchange_relations(sequence):
    seed, records = apply_sequence(initial_seed(2, 6), sequence)
    assert seed.single_column_violations() == []
    rng = np.random.default_rng(len(sequence))
    assert verify_records(records, 2, 6, trials=1, rng=rng) == []


@settings(max_examples=1000, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=6), st.integers(1, 3))
def test_double_mutation_restores_seed(sequence, vertex):
    seed, _ = apply_sequence(initial_seed(2, 6), sequence)
    back, _ = apply_sequence(seed, [vertex, vertex])
    assert back.labels == seed.labels
    assert back.quiver == seed.quiver
