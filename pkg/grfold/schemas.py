"""JSON codecs and report schemas for :mod:`grfold`.

Domain objects keep their own ``to_dict`` where one exists; this module adds
the inverse parsers, the :class:`ResidualReport` produced by the kinematics
suites and :func:`dumps`, which fixes key order and indentation so that
identical runs produce byte-identical output.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Mapping, Optional

import numpy as np

from .errors import GrFoldError, SchemaError
from .folding import EquationForm, FoldResult, Schedule, ScheduleVariant, SeedComparison
from .quiver import Quiver, Vertex
from .seeds import ExchangeRecord, Seed
from .tableaux import Tableau


@dataclass
class IdentityStats:
    """Aggregated residuals of one identity over all trials."""

    max: float
    median: float
    violation_rate: float
    count: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ResidualReport:
    """Outcome of a D=3 suite or a D=4 control run."""

    dim: int
    n: int
    trials: int
    tolerance: float
    rng_seed: int
    passed: bool
    identities: Dict[str, IdentityStats] = field(default_factory=dict)
    sampler_failures: int = 0
    trace_sign: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "n": self.n,
            "trials": self.trials,
            "tolerance": self.tolerance,
            "rng_seed": self.rng_seed,
            "passed": self.passed,
            "identities": {name: stats.to_dict() for name, stats in self.identities.items()},
            "sampler_failures": self.sampler_failures,
            "trace_sign": self.trace_sign,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "ResidualReport":
        try:
            return cls(
                dim=int(payload["dim"]),
                n=int(payload["n"]),
                trials=int(payload["trials"]),
                tolerance=float(payload["tolerance"]),
                rng_seed=int(payload["rng_seed"]),
                passed=bool(payload["passed"]),
                identities={
                    name: IdentityStats(**stats) for name, stats in payload["identities"].items()
                },
                sampler_failures=int(payload.get("sampler_failures", 0)),
                trace_sign=payload.get("trace_sign"),
                notes=list(payload.get("notes", [])),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SchemaError(f"malformed residual report: {exc}") from exc


# ----------------------------------------------------------------------
# Seeds and traces


def tableau_from_rows(rows: Any) -> Tableau:
    try:
        return Tableau(tuple(tuple(row) for row in rows))
    except GrFoldError:
        raise
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed tableau {rows!r}: {exc}") from exc


def seed_to_dict(seed: Seed) -> Dict[str, Any]:
    vertices = []
    for vertex in seed.quiver.vertices:
        payload = vertex.to_dict()
        payload["label"] = seed.labels[vertex.id].to_rows()
        vertices.append(payload)
    return {
        "k": seed.k,
        "n": seed.n,
        "vertices": vertices,
        "arrows": [list(arrow) for arrow in seed.quiver.arrows()],
    }


def seed_from_dict(payload: Mapping[str, Any]) -> Seed:
    """Inverse of :func:`seed_to_dict`."""

    try:
        vertices = [
            Vertex(
                int(item["id"]),
                tuple(item["pos"]) if item.get("pos") is not None else None,  # type: ignore[arg-type]
                bool(item.get("frozen", False)),
            )
            for item in payload["vertices"]
        ]
        labels = {int(item["id"]): tableau_from_rows(item["label"]) for item in payload["vertices"]}
        arrows = [(int(s), int(t), int(m)) for s, t, m in payload["arrows"]]
        quiver = Quiver.from_arrows(vertices, arrows)
        return Seed(int(payload["k"]), int(payload["n"]), quiver, labels)
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError, GrFoldError) as exc:
        raise SchemaError(f"malformed seed: {exc}") from exc


def record_to_dict(record: ExchangeRecord) -> Dict[str, Any]:
    return {
        "vertex": record.vertex,
        "old": record.old_label.to_rows(),
        "new": record.new_label.to_rows(),
        "in": [label.to_rows() for label in record.in_labels],
        "out": [label.to_rows() for label in record.out_labels],
    }


def record_from_dict(payload: Mapping[str, Any]) -> ExchangeRecord:
    try:
        return ExchangeRecord(
            int(payload["vertex"]),
            tableau_from_rows(payload["old"]),
            tableau_from_rows(payload["new"]),
            tuple(tableau_from_rows(rows) for rows in payload["in"]),
            tuple(tableau_from_rows(rows) for rows in payload["out"]),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed exchange record: {exc}") from exc


def schedule_from_dict(payload: Mapping[str, Any]) -> Schedule:
    try:
        return Schedule(
            tuple(int(vertex) for vertex in payload["vertex_ids"]),
            tuple((int(column), int(target)) for column, target in payload.get("runs", [])),
            ScheduleVariant(payload.get("variant", ScheduleVariant.UNIFORM.value)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed schedule: {exc}") from exc


def equation_from_dict(payload: Mapping[str, Any]) -> EquationForm:
    try:
        return EquationForm.from_dict(payload)
    except (KeyError, TypeError, ValueError, GrFoldError) as exc:
        raise SchemaError(f"malformed equation: {exc}") from exc


def fold_result_to_dict(result: FoldResult, equations: List[EquationForm]) -> Dict[str, Any]:
    return {
        "schedule": list(result.schedule.vertex_ids),
        "runs": [list(run) for run in result.schedule.runs],
        "variant": result.schedule.variant.value,
        "seed": seed_to_dict(result.seed),
        "trace": [record_to_dict(record) for record in result.records],
        "equations": [equation.to_dict() for equation in equations],
        "diagnostics": list(result.diagnostics),
    }


# ----------------------------------------------------------------------


def as_serialisable(obj: Any) -> Any:
    """Convert supported objects to built-in types recursively."""

    if isinstance(obj, Seed):
        return seed_to_dict(obj)
    if isinstance(obj, ExchangeRecord):
        return record_to_dict(obj)
    if isinstance(obj, Tableau):
        return obj.to_rows()
    if isinstance(obj, (Schedule, EquationForm, ResidualReport, SeedComparison, Quiver, IdentityStats)):
        return obj.to_dict()
    if isinstance(obj, GrFoldError):
        return obj.to_dict()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, dict):
        return {str(key): as_serialisable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [as_serialisable(item) for item in obj]
    return obj


def dumps(payload: Any) -> str:
    return json.dumps(as_serialisable(payload), indent=2, sort_keys=True)


__all__ = [
    "IdentityStats",
    "ResidualReport",
    "as_serialisable",
    "dumps",
    "equation_from_dict",
    "fold_result_to_dict",
    "record_from_dict",
    "record_to_dict",
    "schedule_from_dict",
    "seed_from_dict",
    "seed_to_dict",
    "tableau_from_rows",
]
