"""Tests for mutation schedules, foldable seeds and folding equations."""
import numpy as np
import pytest
import sympy

from grfold import folding
from grfold.errors import GrFoldError, InvalidParametersError, StructuralError
from grfold.folding import (
    EquationForm,
    PluckerSymbol,
    ScheduleVariant,
    canonical_symbol,
    closed_form_equation,
    closed_form_equations,
    closed_form_pairs,
    column_run,
    compare_seeds,
    constraint_equation,
    equation_for_last_position,
    equations_equal,
    fold_schedule,
    foldable_seed,
    gr4_positions,
    has_column_reflection_symmetry,
    is_square_mesh,
    is_three_term_plucker,
    match_equations,
    predicted_label,
    predicted_label_gr4,
    run_schedule,
    x_identification_equations,
)
from grfold.quiver import Monomial, reverse_quiver, x_coordinate
from grfold.reference import (
    GR49_DRAWN_INITIAL_LABELS,
    GR49_FOLDABLE_LABELS,
    GR49_FOLDABLE_MUTABLE_ARROWS,
    GR49_FOLDING_CONDITIONS,
    GR49_PRINTED_ORDER,
    GR49_SCHEDULE,
    gr49_conditions,
)
from grfold.seeds import (
    apply_sequence,
    initial_seed,
    mutate_seed,
    plucker_eval,
    random_integer_matrix,
    seed_with_labels,
    verify_records,
    vertex_id,
)


@pytest.fixture(scope="module")
def gr49_fold():
    return run_schedule(4, 9)


def equation(lhs_num, lhs_den, rhs_num, rhs_den, n):
    return EquationForm.from_sides(lhs_num, lhs_den, rhs_num, rhs_den, n)


class TestSymbols:

    def test_canonical_symbol_sign(self):
        symbol, sign = canonical_symbol((9, 1, 2, 8), 9)
        assert symbol == PluckerSymbol((1, 2, 8, 9))
        assert sign == -1

    def test_canonical_symbol_reduces_modulo_n(self):
        symbol, sign = canonical_symbol((8, 9, 10, 11), 9)
        assert symbol == PluckerSymbol((1, 2, 8, 9))
        assert sign == 1

    def test_repeated_index_vanishes(self):
        assert canonical_symbol((1, 2, 10, 4), 9) == (None, 0)

    def test_symbol_rejects_unsorted(self):
        with pytest.raises(StructuralError):
            PluckerSymbol((2, 1, 3, 4))

    def test_symbol_text(self):
        assert str(PluckerSymbol((1, 2, 3, 4))) == "P[1,2,3,4]"

    def test_degenerate_equation_rejected(self):
        with pytest.raises(StructuralError):
            equation([(1, 1, 2, 3)], [], [], [], 9)


class TestEquationForm:

    def test_inverse_is_equal(self):
        form = closed_form_equation(3, 6, 9)
        assert equations_equal(form, form)
        assert equations_equal(form, form.inverse())

    def test_wraparound_signs_cancel(self):
        form = equation([(9, 1, 2, 8)], [(9, 1, 2, 3)], [(1, 2, 8, 9)], [(1, 2, 3, 9)], 9)
        assert form.net_sign == 1
        assert form.word.is_one()

    def test_different_sign_is_not_equal(self):
        form = closed_form_equation(3, 6, 9)
        flipped = EquationForm(form.word, -1)
        assert not equations_equal(form, flipped)

    def test_to_dict_round_trip(self):
        form = closed_form_equation(2, 6, 9)
        restored = EquationForm.from_dict(form.to_dict())
        assert restored == form
        assert restored.source == form.source

    def test_evaluate_on_plucker_values(self):
        matrix = random_integer_matrix(4, 9, np.random.default_rng(3))
        form = equation([(1, 2, 3, 4)], [], [(1, 2, 3, 5)], [], 9)
        values = {symbol: plucker_eval(matrix, symbol.indices) for symbol in form.symbols()}
        assert form.evaluate(values) == (
            plucker_eval(matrix, (1, 2, 3, 4)),
            plucker_eval(matrix, (1, 2, 3, 5)),
        )

    @pytest.mark.parametrize("a,c", [(2, 6), (3, 6), (1, 7)])
    def test_constraint_cancels_to_closed_form(self, a, c):
        assert equations_equal(constraint_equation(a, c, 9), closed_form_equation(a, c, 9))


class TestSchedules:

    def test_column_runs(self):
        assert column_run(3, 4, 4, 9) == [9, 10, 11, 12]
        assert column_run(2, 3, 4, 9) == [5, 6, 7]
        assert column_run(1, 0, 4, 9) == []
        assert column_run(1, -2, 4, 9) == []

    def test_gr49_uniform(self):
        schedule = fold_schedule(4, 9)
        assert schedule.vertex_ids == GR49_SCHEDULE
        assert list(schedule.runs) == [(3, 4), (2, 3), (1, 2), (3, 2), (2, 1)]
        assert len(schedule) == 12
        assert schedule.to_dict()["variant"] == "uniform"

    def test_gr46_single_run(self):
        assert fold_schedule(4, 6).vertex_ids == (3,)

    def test_gr610_first_block(self):
        runs = fold_schedule(6, 10).runs
        assert list(runs[:5]) == [(5, 3), (4, 3), (3, 3), (2, 2), (1, 1)]

    def test_literal_variant_runs_are_positive(self):
        literal = fold_schedule(6, 12, ScheduleVariant.LITERAL)
        assert literal.variant is ScheduleVariant.LITERAL
        assert all(target >= 1 for _, target in literal.runs)
        assert literal.runs[:5] == fold_schedule(6, 12).runs[:5]

    @pytest.mark.parametrize("k,n", [(3, 9), (2, 6), (4, 5), (6, 7)])
    def test_unfoldable_parameters(self, k, n):
        with pytest.raises(InvalidParametersError):
            fold_schedule(k, n)


class TestGr49:

    def test_reference_labels_and_arrows(self, gr49_fold):
        comparison = compare_seeds(
            gr49_fold.seed, GR49_FOLDABLE_LABELS, GR49_FOLDABLE_MUTABLE_ARROWS
        )
        assert comparison.matches, comparison.to_dict()

    def test_printed_order_gives_same_seed(self, gr49_fold):
        seed, _ = apply_sequence(initial_seed(4, 9), GR49_PRINTED_ORDER)
        assert seed.labels == gr49_fold.seed.labels
        assert seed.quiver == gr49_fold.seed.quiver

    def test_shape(self, gr49_fold):
        quiver = gr49_fold.seed.quiver
        assert is_square_mesh(quiver)
        assert has_column_reflection_symmetry(quiver)
        assert is_square_mesh(reverse_quiver(quiver))

    def test_initial_quiver_is_not_a_mesh(self):
        assert not is_square_mesh(initial_seed(4, 9).quiver)

    def test_equations_match_reference(self, gr49_fold):
        found = x_identification_equations(gr49_fold.seed)
        assert len(found) == 4
        assert all(form.net_sign == 1 for form in found)
        assert match_equations(found, gr49_conditions()) == ([], [])

    def test_reference_relations_are_the_closed_forms(self):
        assert closed_form_pairs(9) == GR49_FOLDING_CONDITIONS
        assert match_equations(closed_form_equations(9), gr49_conditions()) == ([], [])

    def test_first_condition_literal(self):
        first = equation(
            [(3, 4, 5, 6), (2, 3, 4, 7)],
            [(2, 3, 4, 5)],
            [(4, 5, 6, 7), (3, 6, 7, 8)],
            [(5, 6, 7, 8)],
            9,
        )
        assert equations_equal(first, closed_form_equation(3, 6, 9))

    def test_bottom_row_x_coordinate_carries_fourth_condition(self, gr49_fold):
        seed = gr49_fold.seed
        symbols = {vertex: PluckerSymbol.of(label) for vertex, label in seed.labels.items()}
        middle = {symbols[vertex_id(row, 2, 4, 9)] for row in range(1, 5)}
        word = x_coordinate(seed.quiver, vertex_id(4, 1, 4, 9)).substitute(symbols)

        assert {symbol for symbol, _ in word.items()} & middle == {PluckerSymbol((1, 2, 7, 8))}
        outer = Monomial({symbol: exp for symbol, exp in word.items() if symbol not in middle})
        lhs = Monomial(
            {
                PluckerSymbol((1, 2, 3, 7)): 1,
                PluckerSymbol((1, 2, 8, 9)): 1,
                PluckerSymbol((1, 2, 3, 9)): -1,
            }
        )
        assert outer in (lhs, lhs.inverse())

    def test_net_sign_follows_label_signs(self, gr49_fold, mocker):
        seed = gr49_fold.seed
        real = folding.canonical_symbol
        mocker.patch(
            "grfold.folding.canonical_symbol",
            side_effect=lambda indices, n: (real(indices, n)[0], -1),
        )
        for row, found in enumerate(x_identification_equations(seed), start=1):
            left = x_coordinate(seed.quiver, vertex_id(row, 1, 4, 9))
            right = x_coordinate(seed.quiver, vertex_id(row, 3, 4, 9))
            degree = sum(abs(exp) for _, exp in left.items() + right.items())
            assert found.net_sign == (-1) ** degree

    def test_drawn_labels_do_not_reproduce_reference(self):
        drawn = seed_with_labels(initial_seed(4, 9), GR49_DRAWN_INITIAL_LABELS)
        try:
            seed, _ = apply_sequence(drawn, GR49_SCHEDULE)
        except GrFoldError:
            return
        assert seed.labels != run_schedule(4, 9).seed.labels


class TestPredictions:

    @pytest.mark.parametrize(
        "row,col,expected",
        [
            (1, 1, (2, 3, 4, 6)),
            (2, 1, (2, 3, 4, 7)),
            (1, 2, (3, 4, 6, 7)),
            (4, 3, (2, 7, 8, 9)),
        ],
    )
    def test_gr49_predicted_label(self, row, col, expected):
        assert predicted_label(row, col, 4, 9).indices == expected

    def test_gr4_positions(self):
        assert gr4_positions(1, 9) == (2, 6)
        assert gr4_positions(4, 9) == (1, 8)
        assert gr4_positions(1, 8) == (2, 6)

    def test_gr4_labels(self):
        assert predicted_label_gr4(1, 1, 9).indices == (2, 3, 4, 6)
        assert predicted_label_gr4(1, 3, 9).indices == (3, 5, 6, 7)
        assert predicted_label_gr4(4, 1, 9).indices == (1, 2, 3, 8)
        with pytest.raises(InvalidParametersError):
            predicted_label_gr4(1, 2, 9)

    @pytest.mark.parametrize("k,n", [(4, 8), (4, 10), (4, 11), (6, 10), (6, 11), (6, 12)])
    def test_foldable_seed_matches_predictions(self, k, n):
        result = run_schedule(k, n)
        seed = result.seed
        assert is_square_mesh(seed.quiver)
        assert has_column_reflection_symmetry(seed.quiver)
        for row in range(1, n - k):
            for col in range(1, k):
                label = seed.label(vertex_id(row, col, k, n))
                assert label.column_entries() == predicted_label(row, col, k, n).indices
        assert all(is_three_term_plucker(record, n) for record in result.records)

    def test_foldable_seed_rejects_odd_k(self):
        with pytest.raises(InvalidParametersError):
            foldable_seed(3, 9)


class TestClosedForms:

    def test_gr46_equation(self):
        expected = equation(
            [(1, 2, 3, 4), (1, 2, 5, 6)],
            [(1, 2, 3, 6)],
            [(2, 3, 4, 5), (1, 4, 5, 6)],
            [(3, 4, 5, 6)],
            6,
        )
        forms = closed_form_equations(6)
        assert len(forms) == 1
        assert equations_equal(forms[0], expected)

    def test_last_position_is_wrap_member(self):
        for n in range(6, 15):
            assert equations_equal(equation_for_last_position(n), closed_form_equation(n - 2, 1, n))

    def test_small_n_rejected(self):
        with pytest.raises(InvalidParametersError):
            closed_form_equations(5)

    @pytest.mark.parametrize("n", range(6, 15))
    def test_engine_agrees_with_closed_forms(self, n):
        found = x_identification_equations(foldable_seed(4, n))
        assert len(found) == n - 5
        assert all(form.net_sign == 1 for form in found)
        assert match_equations(found, closed_form_equations(n)) == ([], [])

    @pytest.mark.parametrize("n", range(6, 15))
    def test_no_second_column_symbol_survives(self, n):
        seed = foldable_seed(4, n)
        middle = {
            PluckerSymbol(seed.label(vertex_id(row, 2, 4, n)).column_entries())
            for row in range(1, n - 4)
        }
        for form in x_identification_equations(seed):
            assert not (form.symbols() & middle)

    def test_x_identification_needs_k4(self):
        with pytest.raises(InvalidParametersError):
            x_identification_equations(run_schedule(6, 10).seed)


class TestThreeTerm:

    def test_gr49_records_are_plucker(self, gr49_fold):
        assert all(is_three_term_plucker(record, 9) for record in gr49_fold.records)

    def test_non_plucker_record_rejected(self, gr49_fold):
        record = gr49_fold.records[0]
        shifted = type(record)(
            record.vertex,
            record.old_label,
            record.new_label,
            record.out_labels[:1],
            record.out_labels,
        )
        assert not is_three_term_plucker(shifted, 9)

    @pytest.mark.parametrize("n", range(6, 13))
    def test_schedule_exchanges_hold_exactly(self, n):
        records = run_schedule(4, n).records
        rng = np.random.default_rng(n)
        assert verify_records(records, 4, n, trials=5, rng=rng) == []


def test_gr46_first_mutation_is_exact():
    _, record = mutate_seed(initial_seed(4, 6), 3)
    matrix = sympy.Matrix(np.random.default_rng(0).integers(-9, 10, size=(4, 6)).tolist())
    lhs = plucker_eval(matrix, record.new_label.column_entries()) * plucker_eval(
        matrix, record.old_label.column_entries()
    )
    rhs = sum(
        sympy.prod([plucker_eval(matrix, label.column_entries()) for label in side])
        for side in (record.in_labels, record.out_labels)
    )
    assert sympy.expand(lhs - rhs) == 0
