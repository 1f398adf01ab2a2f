"""Experiment configuration: a single YAML file with a strict schema.

Unknown keys are errors (no silent typo tolerance); every value is a plain
scalar or list so a config round-trips losslessly through YAML and JSON.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import yaml

from .errors import ConfigError
from .functional import ROUTES

__all__ = ["ExperimentConfig", "load_config", "config_from_dict"]

_LADDER_KEYS = {"eps0", "rungs", "factor", "floor_scale"}
_GRID_KEYS = {"x_min", "x_max", "bandwidth"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment parameters.

    ``eps_ladder`` and ``spatial_grid`` hold overrides for the module
    defaults; ``None`` entries mean "use the default formula".
    """

    h: float = 0.7
    horizon: float = 1.0
    steps: int = 1024
    paths: int = 100
    master_seed: int = 20240901
    levels: list = field(default_factory=lambda: [0.5])
    routes: list = field(default_factory=lambda: ["time_integral",
                                                  "hilbert_of_local_time"])
    method: str = "circulant"
    eps_ladder: dict = field(default_factory=dict)
    spatial_grid: dict = field(default_factory=dict)
    qcov_lag_steps: int = 4
    out_dir: str = "out"
    threads: int = 1
    budget_seconds: float | None = None

    def __post_init__(self):
        if not (0.0 < self.h < 1.0):
            raise ConfigError(f"field 'h': Hurst index must lie in (0, 1), got {self.h}")
        if self.horizon <= 0:
            raise ConfigError(f"field 'horizon': must be positive, got {self.horizon}")
        if self.steps < 1:
            raise ConfigError(f"field 'steps': must be a positive integer, got {self.steps}")
        if self.paths < 1:
            raise ConfigError(f"field 'paths': must be a positive integer, got {self.paths}")
        if not (0 <= self.master_seed < 2 ** 64):
            raise ConfigError("field 'master_seed': must fit in 64 unsigned bits")
        if not self.levels:
            raise ConfigError("field 'levels': need at least one level")
        if not self.routes:
            raise ConfigError("field 'routes': need at least one route")
        for r in self.routes:
            if r not in ROUTES:
                raise ConfigError(f"field 'routes': unknown route {r!r}; valid: {ROUTES}")
        if "quadratic_covariation" in self.routes and self.h >= 0.5:
            raise ConfigError(
                "field 'routes': the quadratic_covariation route requires h < 0.5"
            )
        if self.method not in ("circulant", "cholesky"):
            raise ConfigError(f"field 'method': must be circulant or cholesky, got {self.method}")
        if self.qcov_lag_steps < 1:
            raise ConfigError("field 'qcov_lag_steps': must be >= 1")
        if self.threads < 1:
            raise ConfigError("field 'threads': must be >= 1")
        extra = set(self.eps_ladder) - _LADDER_KEYS
        if extra:
            raise ConfigError(f"field 'eps_ladder': unknown keys {sorted(extra)}")
        extra = set(self.spatial_grid) - _GRID_KEYS
        if extra:
            raise ConfigError(f"field 'spatial_grid': unknown keys {sorted(extra)}")

    def to_dict(self) -> dict:
        return asdict(self)

    def replace(self, **kw) -> "ExperimentConfig":
        d = self.to_dict()
        d.update(kw)
        return config_from_dict(d)


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    known = set(ExperimentConfig.__dataclass_fields__)
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown config keys {sorted(extra)}; valid: {sorted(known)}")
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        data = {}
    return config_from_dict(data)
