"""Foldable seeds of Grassmannian cluster algebras and their kinematic checks."""
from __future__ import annotations

from .config import VerificationConfig, load_config
from .errors import GrFoldError
from .folding import (
    EquationForm,
    PluckerSymbol,
    ScheduleVariant,
    closed_form_equations,
    fold_schedule,
    foldable_seed,
    run_schedule,
    x_identification_equations,
)
from .kinematics import KinematicsSample, run_d3_suite, run_d4_control
from .quiver import Quiver, Vertex, mutate_quiver
from .schemas import ResidualReport
from .seeds import ExchangeRecord, Seed, apply_sequence, initial_seed, mutate_seed
from .tableaux import Tableau

__version__ = "0.1.0"

__all__ = [
    "EquationForm",
    "ExchangeRecord",
    "GrFoldError",
    "KinematicsSample",
    "PluckerSymbol",
    "Quiver",
    "ResidualReport",
    "ScheduleVariant",
    "Seed",
    "Tableau",
    "VerificationConfig",
    "Vertex",
    "apply_sequence",
    "closed_form_equations",
    "fold_schedule",
    "foldable_seed",
    "initial_seed",
    "load_config",
    "mutate_quiver",
    "mutate_seed",
    "run_d3_suite",
    "run_d4_control",
    "run_schedule",
    "x_identification_equations",
]
