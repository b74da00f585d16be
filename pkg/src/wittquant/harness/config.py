"""Scenario configuration: a flat record mirroring the CLI flags."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from ..chainring import is_prime

GUARDS = {"max_p": 7, "max_n": 4, "max_cap": 60, "max_r": 3, "max_degree": 6, "max_samples": 10_000}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    p: int = 3
    n: int = 2
    r: int = 1
    degree: int | None = None  # degree cap for truncated linear algebra
    component_degree: int | None = None  # degree bound for sampled components
    terms: int = 3  # term-count bound for sampled components
    seed: int = 0
    samples: int | None = None
    length: int | None = None  # Witt length m
    monomial: tuple[int, ...] | None = None  # generator of the principal monomial ideal m
    generators: tuple[str, ...] = ()  # Weyl generators for central-generation scenarios
    relation_sign: int = 1
    pairing_sign: int = 1
    extra: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = GUARDS
        if not (is_prime(self.p) and 2 < self.p <= g["max_p"]):
            raise ConfigError(f"p={self.p} must be an odd prime <= {g['max_p']}")
        if not 1 <= self.n <= g["max_n"]:
            raise ConfigError(f"n={self.n} outside 1..{g['max_n']}")
        if not 1 <= self.r <= g["max_r"]:
            raise ConfigError(f"r={self.r} outside 1..{g['max_r']}")
        if self.degree is not None and not 0 <= self.degree <= g["max_cap"]:
            raise ConfigError(f"degree cap {self.degree} outside 0..{g['max_cap']}")
        cd = self.component_degree
        if cd is not None and not 0 <= cd <= g["max_degree"]:
            raise ConfigError(f"component degree {cd} outside 0..{g['max_degree']}")
        if not 0 <= self.terms <= 8:
            raise ConfigError(f"terms={self.terms} outside 0..8")
        if self.samples is not None and not 0 <= self.samples <= g["max_samples"]:
            raise ConfigError(f"samples={self.samples} outside 0..{g['max_samples']}")
        if self.length is not None and not 1 <= self.length <= self.n:
            raise ConfigError(f"Witt length {self.length} outside 1..n={self.n}")
        if self.relation_sign not in (1, -1) or self.pairing_sign not in (1, -1):
            raise ConfigError("signs must be +1 or -1")
        if self.monomial is not None:
            object.__setattr__(self, "monomial", tuple(int(e) for e in self.monomial))
        object.__setattr__(self, "generators", tuple(self.generators))

    def with_defaults(self, defaults: dict[str, Any]) -> "ScenarioConfig":
        """Fill fields left at None from a scenario's defaults."""
        changes = {k: v for k, v in defaults.items() if getattr(self, k) is None}
        return replace(self, **changes) if changes else self

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("extra")
        d["monomial"] = list(self.monomial) if self.monomial is not None else None
        d["generators"] = list(self.generators)
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ScenarioConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if data.get("monomial") is not None:
            data["monomial"] = tuple(data["monomial"])
        if "generators" in data:
            data["generators"] = tuple(data["generators"])
        return cls(**data)


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON config file; keys mirror the CLI flags."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    return data
