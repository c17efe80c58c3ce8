"""Run configuration: validated settings loaded from YAML files and command-line flags."""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .catalog import Immersion, MobiusTransform, parse_spec, parse_transform, spec_from_dict, transform_from_list
from .errors import ConfigError
from .quadrature import DEFAULT_GRID, GridSpec
from .verify import MIN_DEGREE, Tolerances


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridConfig(_Strict):
    base: tuple[float, float, float, float] = DEFAULT_GRID.base
    levels: tuple[float, float, float] = DEFAULT_GRID.levels

    @field_validator("base", "levels")
    @classmethod
    def _positive(cls, v):
        if any(x <= 0 for x in v):
            raise ValueError("grid entries must be positive")
        return v

    def spec(self) -> GridSpec:
        return GridSpec(tuple(self.base), tuple(self.levels))


class ToleranceConfig(_Strict):
    identity: float = Field(1e-8, gt=0)
    conservation: float = Field(1e-7, gt=0)
    rivvy: float = Field(1e-7, gt=0)
    quadrature: float = Field(1e-4, gt=0)
    evidence: float = Field(1e-3, gt=0)

    def tolerances(self) -> Tolerances:
        return Tolerances(self.identity, self.rivvy, self.conservation, self.quadrature, self.evidence)


class OutputConfig(_Strict):
    report: Optional[Path] = None
    tables: Optional[Path] = None


class RunConfig(_Strict):
    spec: Union[str, dict[str, Any]] = "sphere:r=1"
    transform: Optional[Union[str, list[dict[str, Any]]]] = None
    seed: int = 0
    points: Optional[int] = Field(None, ge=1)  # per-command default when unset
    degree: Optional[int] = Field(None, ge=2, le=6)
    chart: Optional[str] = None
    region: Optional[str] = None
    mu: float = 0.0
    grid: Optional[GridConfig] = None
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    informational: bool = False

    def immersion(self) -> Immersion:
        return parse_spec(self.spec) if isinstance(self.spec, str) else spec_from_dict(self.spec)

    def mobius(self) -> MobiusTransform | None:
        if self.transform is None:
            return None
        if isinstance(self.transform, str):
            return parse_transform(self.transform)
        return transform_from_list(self.transform)

    def check_degree(self, command: str) -> None:
        need = MIN_DEGREE[command]
        if self.degree is not None and self.degree < need:
            raise ConfigError(f"{command} needs jet degree >= {need}, got {self.degree}")

    def echo(self) -> dict:
        return self.model_dump(mode="json")


def load_config(path: str | Path | None, overrides: dict | None = None) -> RunConfig:
    """Read a YAML config (unknown keys rejected) and apply flag overrides on top."""
    data: dict = {}
    if path is not None:
        try:
            loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a mapping")
        data = loaded
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in ("tolerances", "output"):
            data[key] = {**(data.get(key) or {}), **value}
        else:
            data[key] = value
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
