"""Run configuration shared by the command line and the experiment scripts."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Every knob of a run; all algorithms are deterministic, so there is no seed."""

    command: str = ""
    presentation: str | None = None
    genset: str | None = None
    base: str | None = None
    input: str | None = None
    output: str | None = None
    format: str = "human"
    radius: int = 6
    budget: int | None = None
    semi: bool = False
    certify: bool = False
    max_weight: int = 12
    emit_limit: int | None = None
    budget_unit: int = 100
    level_weight: int = 1
    cap: int = 1_000_000
    generation_budget: int = 4
    steps_per_stage: int = 200
    r: str | None = None
    max_genset_length: int = 3
    rounds: int = 40
    size: int = 2
    max_length: int = 4
    epsilon: float | None = None
    steps: int = 6
    expr: str | None = None
    realize: bool = False
    depth: int = 8
    schedule: list[float] | None = None
    max_rules: int = 200
    max_lhs_len: int = 24
    cache_dir: str | None = None

    _NONNEGATIVE = ("radius", "budget", "max_weight", "emit_limit", "budget_unit", "cap", "generation_budget",
                    "steps_per_stage", "max_genset_length", "rounds", "size", "max_length", "steps", "depth",
                    "max_rules", "max_lhs_len")

    def validate(self) -> "RunConfig":
        for name in self._NONNEGATIVE:
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
                raise ConfigError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.level_weight < 1:
            raise ConfigError("level_weight must be >= 1")
        if self.format not in ("human", "records"):
            raise ConfigError(f"format must be 'human' or 'records', got {self.format!r}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")
        return self

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data).validate()

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def merged(self, overrides: dict) -> "RunConfig":
        data = asdict(self)
        data.update(overrides)
        return RunConfig.from_dict(data)

    def save(self, path: str | Path):
        Path(path).write_text(self.to_json() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.from_json(Path(path).read_text())
