"""Configuration values shared by the verification routines."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional, Union, get_type_hints

import yaml

from .errors import InvalidParametersError


@dataclass(frozen=True)
class VerificationConfig:
    """Tolerances, trial counts and sampler knobs.

    Parameters
    ----------
    tolerance:
        Maximum relative residual accepted by the D=3 suite.
    trials:
        Number of kinematic samples per suite run.
    rng_seed:
        Master seed; per-trial streams are spawned from it.
    resample_limit:
        Attempts allowed before a sampler gives up.
    entry_range:
        Integer entries of random rational matrices are drawn from
        ``[-entry_range, entry_range]``.
    grid_range:
        Real and imaginary parts of D=3 spinor components are drawn from
        ``[-grid_range, grid_range]``.
    bracket_floor, plucker_floor:
        Genericity floors, relative to the natural scale of the quantity.
    d4_threshold, d4_violation_rate:
        A D=4 control passes when every folding equation is violated beyond
        ``d4_threshold`` in at least ``d4_violation_rate`` of the trials.
    exchange_trials:
        Random matrices used per exchange-relation check.
    """

    tolerance: float = 1e-8
    trials: int = 20
    rng_seed: int = 0
    resample_limit: int = 100
    entry_range: int = 9
    grid_range: int = 5
    bracket_floor: float = 1e-3
    plucker_floor: float = 1e-6
    d4_threshold: float = 1e-3
    d4_violation_rate: float = 0.95
    exchange_trials: int = 5

    def updated(self, **overrides: Any) -> "VerificationConfig":
        """Return a copy with every non-``None`` override applied."""

        values = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **values) if values else self


def _matches(value: Any, expected: type) -> bool:
    if value is None:
        return True
    if isinstance(value, bool):
        return expected is bool
    if expected is float:
        return isinstance(value, (int, float))
    return isinstance(value, expected)


def config_from_mapping(data: Mapping[str, Any]) -> VerificationConfig:
    known = {item.name for item in fields(VerificationConfig)}
    unknown = sorted(str(key) for key in set(data) - known)
    if unknown:
        raise InvalidParametersError(f"unknown configuration keys: {', '.join(unknown)}")
    hints = get_type_hints(VerificationConfig)
    for key, value in data.items():
        if not _matches(value, hints[key]):
            raise InvalidParametersError(
                f"configuration key {key!r} expects {hints[key].__name__}, got {value!r}"
            )
    return VerificationConfig().updated(**dict(data))


def load_config(path: Optional[Union[str, Path]]) -> VerificationConfig:
    """Load a YAML configuration file; ``None`` yields the defaults."""

    if path is None:
        return VerificationConfig()
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = yaml.safe_load(handle) or {}
        except yaml.YAMLError as exc:
            raise InvalidParametersError(f"configuration file {path} is not valid YAML: {exc}") from exc
    if not isinstance(data, Mapping):
        raise InvalidParametersError(f"configuration file {path} must contain a mapping")
    return config_from_mapping(data)


__all__ = ["VerificationConfig", "config_from_mapping", "load_config"]
