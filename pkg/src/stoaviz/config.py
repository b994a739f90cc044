"""Runtime configuration: key=value file plus environment overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields

from .spatial import DEFAULT_CELL_SIZE_DEG, DEFAULT_POWER, DEFAULT_RADIUS_KM

ENV_DATA = "STOAVIZ_DATA"
ENV_PORT = "STOAVIZ_PORT"

DEFAULT_THRESHOLDS = [float(t) for t in range(0, 601, 50)]


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    data_dir: str = "data"
    host: str = "127.0.0.1"
    port: int = 8080
    idw_power: float = DEFAULT_POWER
    idw_radius_km: float = DEFAULT_RADIUS_KM
    cell_size_deg: float = DEFAULT_CELL_SIZE_DEG
    contour_refine: int = 0  # 0 = auto from grid size
    neighbor_radius_km: float = 10.0
    thresholds: list[float] = field(
        default_factory=lambda: list(DEFAULT_THRESHOLDS))
    cors_origins: list[str] = field(default_factory=lambda: ["*"])


def _parse_value(name: str, raw: str, kind: type) -> object:
    raw = raw.strip()
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is str:
            return raw
        return [part.strip() for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def load_config(path: str | None = None,
                env: dict[str, str] | None = None) -> Config:
    """Build a Config from an optional key=value file and the environment.

    Lines starting with '#' are comments. Environment variables win over
    the file.
    """
    env = os.environ if env is None else env
    cfg = Config()
    kinds = {f.name: f.type for f in fields(Config)}
    if path:
        try:
            lines = open(path, "r", encoding="utf-8").read().splitlines()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        for i, line in enumerate(lines, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{i}: expected key=value")
            key, _, raw = line.partition("=")
            key = key.strip()
            if key not in kinds:
                raise ConfigError(f"{path}:{i}: unknown key {key!r}")
            current = getattr(cfg, key)
            if key == "thresholds":
                vals = [float(v) for v in raw.split(",") if v.strip()]
                setattr(cfg, key, vals)
            elif isinstance(current, list):
                setattr(cfg, key, _parse_value(key, raw, list))
            else:
                setattr(cfg, key, _parse_value(key, raw, type(current)))
    if ENV_DATA in env:
        cfg.data_dir = env[ENV_DATA]
    if ENV_PORT in env:
        try:
            cfg.port = int(env[ENV_PORT])
        except ValueError:
            raise ConfigError(
                f"{ENV_PORT} must be an integer, got {env[ENV_PORT]!r}"
            ) from None
    if len(cfg.thresholds) < 2 or any(
            b <= a for a, b in zip(cfg.thresholds, cfg.thresholds[1:])):
        raise ConfigError("thresholds must be >=2 ascending values")
    return cfg
