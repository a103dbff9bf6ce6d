from __future__ import annotations
import os
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, Field

from src.spectrum.frequencies import DEFAULT_ENUMERATION_LIMIT, FrequencyScheme

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
PRESETS_PATH = os.path.join(ROOT, "configs", "presets.yaml")
DEFAULT_PRESET = "exp1"

_SCHEME_KEYS = ("kind", "axes", "u_mode", "u", "p", "v", "h")


def _default_threads() -> int:
    return max(1, os.cpu_count() or 1)


class RunConfig(BaseModel):
    command: Literal["count", "oracle", "verify", "spectrum", "profile"]
    input: Optional[str] = None
    preset: str = DEFAULT_PRESET

    # frequency scheme
    kind: Literal["sine", "ternary"] = "sine"
    axes: Literal[1, 2, 4] = 4
    u_mode: Literal["n2", "n3", "explicit"] = "n2"
    u: Optional[float] = None
    p: float = 1.0
    v: Optional[float] = None
    h: Optional[float] = None

    # integerization / lattice
    multiplier: Optional[int] = Field(None, ge=1, description="None picks ceil((n+1)/m.m.f)")
    modulus: Optional[int] = Field(None, ge=1, description="None picks 2 + max axis sum")
    tolerance: float = Field(1e-6, gt=0)
    max_points: Optional[int] = Field(None, ge=1, description="None reads SATSUM_MAX_LATTICE_POINTS or 1e9")
    force: bool = False
    limit: int = Field(DEFAULT_ENUMERATION_LIMIT, ge=1)
    threads: int = Field(default_factory=_default_threads, ge=1)

    # spectrum / profile
    n_min: int = Field(2, ge=1)
    n_max: int = Field(10, ge=1)
    n: int = Field(6, ge=1)
    signs: Optional[List[int]] = None
    t_start: float = 0.9
    t_stop: float = 1.1
    samples: int = Field(201, ge=2)

    # output
    format: Optional[Literal["json", "csv"]] = None
    output: Optional[str] = None
    include_timing: bool = False
    progress: bool = False

    def scheme(self) -> FrequencyScheme:
        return FrequencyScheme(name=self.preset, **{k: getattr(self, k) for k in _SCHEME_KEYS})

    def output_format(self) -> str:
        if self.format:
            return self.format
        return "csv" if self.command in ("spectrum", "profile") else "json"


def load_presets(path: str = PRESETS_PATH) -> Dict[str, Dict[str, Any]]:
    with open(path) as f:
        return yaml.safe_load(f) or {}


def load_yaml_config(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    with open(path) as f:
        return yaml.safe_load(f) or {}


def build_run_config(command: str, yaml_cfg: Optional[Dict[str, Any]] = None, **overrides) -> RunConfig:
    """Preset defaults, then YAML run config, then explicit (non-None) overrides."""
    yaml_cfg = dict(yaml_cfg or {})
    cli = {k: v for k, v in overrides.items() if v is not None}
    preset = cli.get("preset") or yaml_cfg.get("preset") or DEFAULT_PRESET
    presets = load_presets()
    if preset not in presets:
        raise ValueError(f"unknown preset {preset!r}; known: {', '.join(sorted(presets))}")
    merged: Dict[str, Any] = dict(presets[preset])
    merged.update(yaml_cfg)
    merged.update(cli)
    merged["preset"] = preset
    merged["command"] = command
    return RunConfig(**merged)
