"""Command-line interface for building, folding and verifying seeds."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .config import VerificationConfig, load_config
from .dot import to_dot
from .errors import (
    GrFoldError,
    InvalidMutationError,
    InvalidParametersError,
    SchemaError,
    StructuralError,
)
from .folding import (
    ScheduleVariant,
    closed_form_equations,
    compare_seeds,
    has_column_reflection_symmetry,
    is_square_mesh,
    is_three_term_plucker,
    match_equations,
    predicted_label,
    predicted_label_gr4,
    run_schedule,
    x_identification_equations,
)
from .kinematics import run_d3_suite, run_d4_control
from .reference import (
    GR49,
    GR49_DRAWN_INITIAL_LABELS,
    GR49_FOLDABLE_FROZEN_ARROWS,
    GR49_FOLDABLE_LABELS,
    GR49_FOLDABLE_MUTABLE_ARROWS,
    GR49_PRINTED_ORDER,
    gr49_conditions,
)
from .schemas import dumps, fold_result_to_dict, record_to_dict, seed_from_dict, seed_to_dict
from .seeds import Seed, apply_sequence, initial_seed, seed_with_labels, vertex_id, verify_records

LOGGER = logging.getLogger(__name__)

USAGE_ERRORS = (InvalidParametersError, InvalidMutationError, SchemaError, OSError)


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        LOGGER.info("Wrote %s", args.out)
    else:
        sys.stdout.write(text + "\n")


def _emit_seed(args: argparse.Namespace, seed: Seed, payload: Dict[str, Any]) -> None:
    if getattr(args, "format", "json") == "dot":
        _emit(args, to_dot(seed))
    else:
        _emit(args, dumps(payload))


def _parse_ints(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidParametersError(f"expected comma-separated integers, got {text!r}") from None


def _parse_positions(text: str) -> List[Tuple[int, int]]:
    positions = []
    for item in text.split(","):
        if not item.strip():
            continue
        try:
            row, col = item.split(":")
            positions.append((int(row), int(col)))
        except ValueError:
            raise InvalidParametersError(f"expected positions like '1:3,2:3', got {text!r}") from None
    return positions


def _load_seed(args: argparse.Namespace) -> Seed:
    if not getattr(args, "input", None):
        return initial_seed(args.k, args.n)
    try:
        payload = json.loads(Path(args.input).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{args.input} is not valid JSON: {exc}") from exc
    if isinstance(payload, dict) and "seed" in payload:
        payload = payload["seed"]
    return seed_from_dict(payload)


def _settings(args: argparse.Namespace) -> VerificationConfig:
    return getattr(args, "settings", None) or VerificationConfig()


# ----------------------------------------------------------------------
# Commands


def seed(args: argparse.Namespace) -> int:
    start = initial_seed(args.k, args.n)
    _emit_seed(args, start, seed_to_dict(start))
    return 0


def mutate(args: argparse.Namespace) -> int:
    start = _load_seed(args)
    if args.sequence and args.positions:
        raise InvalidParametersError("use either --sequence or --positions, not both")
    if args.positions:
        vertices = [start.quiver.vertex_at(pos) for pos in _parse_positions(args.positions)]
    else:
        vertices = _parse_ints(args.sequence or "")

    diagnostics: List[str] = []
    result, records = apply_sequence(start, vertices, diagnostics)
    payload = {
        "seed": seed_to_dict(result),
        "trace": [record_to_dict(record) for record in records],
        "diagnostics": diagnostics,
    }
    _emit_seed(args, result, payload)
    return 0


def fold(args: argparse.Namespace) -> int:
    result = run_schedule(args.k, args.n, ScheduleVariant(args.variant))
    quiver = result.seed.quiver
    checks = {
        "square_mesh": is_square_mesh(quiver),
        "reflection_symmetry": has_column_reflection_symmetry(quiver),
    }
    equations = []
    if args.k == 4 and all(checks.values()):
        equations = x_identification_equations(result.seed)

    payload = fold_result_to_dict(result, equations)
    payload["checks"] = checks
    _emit_seed(args, result.seed, payload)
    return 0


def _gr49_checks(result_seed: Seed, equations: List[Any]) -> Tuple[Dict[str, bool], Dict[str, Any]]:
    checks: Dict[str, bool] = {}
    details: Dict[str, Any] = {}

    labels = compare_seeds(result_seed, GR49_FOLDABLE_LABELS, GR49_FOLDABLE_MUTABLE_ARROWS)
    checks["reference_seed"] = labels.matches
    details["reference_seed"] = labels.to_dict()

    frozen = compare_seeds(
        result_seed,
        {},
        GR49_FOLDABLE_MUTABLE_ARROWS + GR49_FOLDABLE_FROZEN_ARROWS,
        include_frozen=True,
    )
    details["reference_frozen_arrows"] = frozen.to_dict()

    printed, _ = apply_sequence(initial_seed(*GR49), GR49_PRINTED_ORDER)
    checks["printed_order"] = printed.labels == result_seed.labels and printed.quiver == result_seed.quiver

    unmatched, missing = match_equations(equations, gr49_conditions())
    checks["reference_equations"] = not unmatched and not missing
    checks["reference_net_signs"] = all(equation.net_sign == 1 for equation in equations)

    drawn = seed_with_labels(initial_seed(*GR49), GR49_DRAWN_INITIAL_LABELS)
    try:
        drawn_result, _ = apply_sequence(drawn, run_schedule(*GR49).schedule.vertex_ids)
        details["drawn_initial_labels"] = compare_seeds(
            drawn_result, GR49_FOLDABLE_LABELS, GR49_FOLDABLE_MUTABLE_ARROWS
        ).to_dict()
    except GrFoldError as exc:
        details["drawn_initial_labels"] = exc.to_dict()
    return checks, details


def verify_seed(args: argparse.Namespace) -> int:
    k, n = args.k, args.n
    result = run_schedule(k, n, ScheduleVariant(args.variant))
    folded = result.seed
    quiver = folded.quiver

    checks: Dict[str, bool] = {
        "square_mesh": is_square_mesh(quiver),
        "reflection_symmetry": has_column_reflection_symmetry(quiver),
        "three_term_exchanges": all(is_three_term_plucker(record, n) for record in result.records),
        "single_column_labels": not folded.single_column_violations(),
    }
    details: Dict[str, Any] = {"diagnostics": list(result.diagnostics)}

    label_mismatches = []
    for row in range(1, n - k):
        for col in range(1, k):
            found = folded.label(vertex_id(row, col, k, n))
            expected = predicted_label(row, col, k, n)
            if not found.is_single_column or found.column_entries() != expected.indices:
                label_mismatches.append({"pos": [row, col], "expected": list(expected.indices)})
    checks["predicted_labels"] = not label_mismatches
    details["label_mismatches"] = label_mismatches

    if k == 4 and checks["square_mesh"] and checks["single_column_labels"]:
        checks["closed_form_labels"] = all(
            folded.label(vertex_id(row, col, 4, n)).column_entries()
            == predicted_label_gr4(row, col, n).indices
            for row in range(1, n - 4)
            for col in (1, 3)
        )
        try:
            equations = x_identification_equations(folded)
        except StructuralError as exc:
            checks["closed_form_equations"] = False
            details["equations"] = exc.to_dict()
        else:
            unmatched, missing = match_equations(equations, closed_form_equations(n))
            checks["closed_form_equations"] = not unmatched and not missing
            details["equations"] = [equation.to_dict() for equation in equations]
            if (k, n) == GR49:
                gr49, extra = _gr49_checks(folded, equations)
                checks.update(gr49)
                details.update(extra)

    passed = all(checks.values())
    LOGGER.info("verify-seed Gr(%d,%d): %s", k, n, "pass" if passed else "FAIL")
    _emit(args, dumps({"k": k, "n": n, "passed": passed, "checks": checks, "details": details}))
    return 0 if passed else 1


def verify_exchange(args: argparse.Namespace) -> int:
    settings = _settings(args).updated(exchange_trials=args.trials, rng_seed=args.rng_seed)
    if args.sequence:
        _, records = apply_sequence(initial_seed(args.k, args.n), _parse_ints(args.sequence))
    else:
        records = list(run_schedule(args.k, args.n, ScheduleVariant(args.variant)).records)

    rng = np.random.default_rng(settings.rng_seed)
    failures = verify_records(
        records,
        args.k,
        args.n,
        settings.exchange_trials,
        rng,
        entry_range=settings.entry_range,
        resample_limit=settings.resample_limit,
    )
    passed = not failures
    payload = {
        "k": args.k,
        "n": args.n,
        "records": len(records),
        "trials": settings.exchange_trials,
        "rng_seed": settings.rng_seed,
        "failures": [list(failure) for failure in failures],
        "passed": passed,
    }
    _emit(args, dumps(payload))
    return 0 if passed else 1


def verify_kinematics(args: argparse.Namespace) -> int:
    settings = _settings(args).updated(trials=args.trials, rng_seed=args.rng_seed)
    if args.dim == 3:
        report = run_d3_suite(args.n, settings.updated(tolerance=args.tol))
    else:
        report = run_d4_control(args.n, settings.updated(d4_threshold=args.tol))
    _emit(args, dumps(report))
    return 0 if report.passed else 1


def export_dot(args: argparse.Namespace) -> int:
    if args.input:
        target = _load_seed(args)
    elif args.stage == "initial":
        target = initial_seed(args.k, args.n)
    else:
        target = run_schedule(args.k, args.n, ScheduleVariant(args.variant)).seed
    _emit(args, to_dot(target, include_frozen=not args.mutable_only))
    return 0


# ----------------------------------------------------------------------


def _add_grassmannian_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--k', type=int, default=4, help='Grassmannian rank (default: %(default)s)')
    parser.add_argument('--n', type=int, default=9, help='Number of columns (default: %(default)s)')


def _add_output_args(parser: argparse.ArgumentParser, *, formats: bool = True) -> None:
    parser.add_argument('--out', help='Write output to this file instead of stdout')
    if formats:
        parser.add_argument('--format', choices=['json', 'dot'], default='json', help='Output format (default: %(default)s)')


def _add_variant_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--variant',
        choices=[variant.value for variant in ScheduleVariant],
        default=ScheduleVariant.UNIFORM.value,
        help='Column-run schedule (default: %(default)s)',
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Foldable seeds of Grassmannian cluster algebras")
    parser.add_argument('-v', '--verbose', action='count', default=0, help='Increase log verbosity')
    parser.add_argument('--config', help='YAML file with verification settings')

    subparsers = parser.add_subparsers(dest='command', required=True)

    seed_parser = subparsers.add_parser('seed', help='Print the rectangles seed of Gr(k,n)')
    _add_grassmannian_args(seed_parser)
    _add_output_args(seed_parser)
    seed_parser.set_defaults(func=seed)

    mutate_parser = subparsers.add_parser('mutate', help='Apply a mutation sequence and print the trace')
    _add_grassmannian_args(mutate_parser)
    mutate_parser.add_argument('--sequence', help='Comma-separated vertex ids, e.g. 9,10,11')
    mutate_parser.add_argument('--positions', help='Comma-separated row:col pairs, e.g. 1:3,2:3')
    mutate_parser.add_argument('--input', help='Start from a seed stored as JSON')
    _add_output_args(mutate_parser)
    mutate_parser.set_defaults(func=mutate)

    fold_parser = subparsers.add_parser('fold', help='Build the foldable seed and its folding equations')
    _add_grassmannian_args(fold_parser)
    _add_variant_arg(fold_parser)
    _add_output_args(fold_parser)
    fold_parser.set_defaults(func=fold)

    verify_seed_parser = subparsers.add_parser('verify-seed', help='Check the foldable seed against its predicted shape')
    _add_grassmannian_args(verify_seed_parser)
    _add_variant_arg(verify_seed_parser)
    _add_output_args(verify_seed_parser, formats=False)
    verify_seed_parser.set_defaults(func=verify_seed)

    exchange_parser = subparsers.add_parser('verify-exchange', help='Check exchange relations in exact arithmetic')
    _add_grassmannian_args(exchange_parser)
    _add_variant_arg(exchange_parser)
    exchange_parser.add_argument('--sequence', help='Check this sequence instead of the schedule')
    exchange_parser.add_argument('--trials', type=int, default=None, help='Random matrices per exchange')
    exchange_parser.add_argument('--rng-seed', type=int, default=None, help='Master random seed')
    _add_output_args(exchange_parser, formats=False)
    exchange_parser.set_defaults(func=verify_exchange)

    kinematics_parser = subparsers.add_parser('verify-kinematics', help='Run the D=3 suite or the D=4 control')
    kinematics_parser.add_argument('--n', type=int, default=9, help='Number of particles (default: %(default)s)')
    kinematics_parser.add_argument('--dim', type=int, choices=[3, 4], default=3, help='Kinematics dimension')
    kinematics_parser.add_argument('--trials', type=int, default=None, help='Number of samples')
    kinematics_parser.add_argument('--tol', type=float, default=None, help='Tolerance (D=3) or violation threshold (D=4)')
    kinematics_parser.add_argument('--rng-seed', type=int, default=None, help='Master random seed')
    _add_output_args(kinematics_parser, formats=False)
    kinematics_parser.set_defaults(func=verify_kinematics)

    dot_parser = subparsers.add_parser('export-dot', help='Write a seed as Graphviz DOT')
    _add_grassmannian_args(dot_parser)
    _add_variant_arg(dot_parser)
    dot_parser.add_argument('--stage', choices=['initial', 'folded'], default='folded', help='Which seed to draw')
    dot_parser.add_argument('--input', help='Draw a seed stored as JSON')
    dot_parser.add_argument('--mutable-only', action='store_true', help='Leave out frozen vertices')
    _add_output_args(dot_parser, formats=False)
    dot_parser.set_defaults(func=export_dot)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _report_error(exc: Exception) -> None:
    payload = exc.to_dict() if isinstance(exc, GrFoldError) else {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        args.settings = load_config(args.config)
        return args.func(args)  # type: ignore[misc]
    except GrFoldError as exc:
        _report_error(exc)
        cause = getattr(exc, "cause", exc)
        return 2 if isinstance(cause, USAGE_ERRORS) else 1
    except OSError as exc:
        _report_error(exc)
        return 2


if __name__ == '__main__':  # pragma: no cover
    sys.exit(main())
