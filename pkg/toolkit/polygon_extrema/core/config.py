"""Tolerances, solver profiles and settings loading."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict

import yaml

OUTPUT_DIR_ENV = "POLYGON_EXTREMA_OUT"
DEFAULT_OUTPUT_DIR = "./out"

ENUMERATION_CAP = 100
# sign patterns per enumeration half are kept below 2**ENUMERATION_HALF_BITS
ENUMERATION_HALF_BITS = 20
MAX_SEARCH_N = 16


@dataclass(frozen=True)
class Tolerances:
    """Every numeric threshold used by predicates and checks."""

    cross: float = 1e-12
    vertex_separation: float = 1e-12
    metric: float = 1e-9
    equality: float = 1e-9
    symmetry: float = 1e-9
    closure: float = 1e-9
    feasibility: float = 1e-7
    constant_width: float = 1e-7


TOLERANCES = Tolerances()


PROFILE_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "desk": {
        "starts": 64,
        "max_iter": 500,
        "penalty_rounds": 3,
        "penalty_weight": 10.0,
        "ftol": 1e-12,
        "width_rounds": 6,
        "seeded_starts": 4,
    },
    "quick": {
        "starts": 16,
        "max_iter": 300,
        "penalty_rounds": 2,
        "penalty_weight": 10.0,
        "ftol": 1e-10,
        "width_rounds": 4,
        "seeded_starts": 2,
    },
    "thorough": {
        "starts": 256,
        "max_iter": 1000,
        "penalty_rounds": 4,
        "penalty_weight": 10.0,
        "ftol": 1e-14,
        "width_rounds": 8,
        "seeded_starts": 8,
    },
}


@dataclass
class Settings:
    tolerances: Tolerances = field(default_factory=Tolerances)
    profiles: Dict[str, Dict[str, Any]] = field(
        default_factory=lambda: {k: dict(v) for k, v in PROFILE_DEFAULTS.items()}
    )
    enumeration_cap: int = ENUMERATION_CAP
    output_dir: str | None = None

    def resolve_output_dir(self) -> str:
        return self.output_dir or default_output_dir()


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR


def load_settings(path: str | os.PathLike[str] | None = None) -> Settings:
    """Load settings from a YAML file; missing sections keep their defaults."""

    settings = Settings()
    if path is None:
        return settings
    raw = yaml.safe_load(Path(path).read_text(encoding="utf-8")) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: settings must be a mapping")
    unknown = set(raw) - {"tolerances", "profiles", "enumeration_cap", "output_dir"}
    if unknown:
        raise ValueError(f"{path}: unknown settings {sorted(unknown)}")

    if "tolerances" in raw:
        known = {f.name for f in fields(Tolerances)}
        bad = set(raw["tolerances"]) - known
        if bad:
            raise ValueError(f"{path}: unknown tolerances {sorted(bad)}")
        settings.tolerances = replace(
            settings.tolerances,
            **{k: float(v) for k, v in raw["tolerances"].items()},
        )
    for name, overrides in (raw.get("profiles") or {}).items():
        base = settings.profiles.get(name, dict(PROFILE_DEFAULTS["desk"]))
        base.update(overrides or {})
        settings.profiles[name] = base
    if "enumeration_cap" in raw:
        settings.enumeration_cap = int(raw["enumeration_cap"])
    if raw.get("output_dir"):
        settings.output_dir = str(raw["output_dir"])
    return settings
