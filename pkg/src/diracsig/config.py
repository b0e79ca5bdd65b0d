"""Run configuration, canonical JSON, and content hashing.

Configs are single-file JSON key-value documents with dotted-path CLI
overrides.  Every exported artifact embeds the content hash of the
config that produced it; hashing is over a canonical rendering (sorted
keys, compact separators, floats at 17 significant digits) so it is
stable under key reordering.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import ConfigError, IOFailure, SchemaError


def _canonical_number(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise SchemaError("non-finite floats are not serializable")
    if x == 0.0:
        x = 0.0  # collapse -0.0
    return format(x, ".17g")


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, no spaces, 17-significant-digit floats."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _canonical_number(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: kv[0])
        return "{" + ",".join(f"{json.dumps(str(k))}:{canonical_json(v)}" for k, v in items) + "}"
    raise SchemaError(f"cannot canonicalize object of type {type(obj).__name__}")


def content_hash(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs: model, truncation, quadrature, checks, seeds."""

    model: str = "drum"
    mass: float = 0.0
    slab_lifetime: float = 2.0
    n_max: int = 8
    surface_order: int = 128
    volume_order: int = 160
    symmetries: tuple[str, ...] = ()  # empty = all applicable
    weight: str = "indicator_negative"
    delta_tau: float = 1e-3
    translation: float = 0.7
    seed: int = 1234
    tolerances: tuple[tuple[str, float], ...] = ()
    global_tolerance: float | None = None
    cache_dir: str | None = None

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "mass": self.mass,
            "slab_lifetime": self.slab_lifetime,
            "n_max": self.n_max,
            "quad": {"surface_order": self.surface_order, "volume_order": self.volume_order},
            "symmetries": list(self.symmetries),
            "weight": self.weight,
            "delta_tau": self.delta_tau,
            "translation": self.translation,
            "seed": self.seed,
            "tolerances": {k: v for k, v in self.tolerances},
            "global_tolerance": self.global_tolerance,
            "cache_dir": self.cache_dir,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        known = {
            "model",
            "mass",
            "slab_lifetime",
            "n_max",
            "quad",
            "symmetries",
            "weight",
            "delta_tau",
            "translation",
            "seed",
            "tolerances",
            "global_tolerance",
            "cache_dir",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        quad = raw.get("quad", {})
        if not isinstance(quad, dict):
            raise ConfigError("config key 'quad' must be an object")
        tol = raw.get("tolerances", {})
        if not isinstance(tol, dict):
            raise ConfigError("config key 'tolerances' must be an object")
        try:
            cfg = cls(
                model=str(raw.get("model", "drum")),
                mass=float(raw.get("mass", 0.0)),
                slab_lifetime=float(raw.get("slab_lifetime", 2.0)),
                n_max=int(raw.get("n_max", 8)),
                surface_order=int(quad.get("surface_order", 128)),
                volume_order=int(quad.get("volume_order", 160)),
                symmetries=tuple(str(s) for s in raw.get("symmetries", [])),
                weight=str(raw.get("weight", "indicator_negative")),
                delta_tau=float(raw.get("delta_tau", 1e-3)),
                translation=float(raw.get("translation", 0.7)),
                seed=int(raw.get("seed", 1234)),
                tolerances=tuple(sorted((str(k), float(v)) for k, v in tol.items())),
                global_tolerance=(
                    None if raw.get("global_tolerance") is None else float(raw["global_tolerance"])
                ),
                cache_dir=(None if raw.get("cache_dir") is None else str(raw["cache_dir"])),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config value: {exc}") from exc
        if cfg.model not in ("drum", "slab"):
            raise ConfigError(f"unknown model {cfg.model!r} (expected 'drum' or 'slab')")
        if cfg.n_max < 1:
            raise ConfigError("n_max must be >= 1")
        return cfg

    def hash(self) -> str:
        return content_hash(self.to_dict())

    def assembly_dict(self) -> dict:
        """The subset of the config that determines the assembled matrices."""
        return {
            "model": self.model,
            "mass": self.mass,
            "slab_lifetime": self.slab_lifetime if self.model == "slab" else None,
            "n_max": self.n_max,
            "quad": {
                "surface_order": self.surface_order,
                "volume_order": self.volume_order,
                "summation": "grid-order",
            },
        }


def load_config(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IOFailure(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return RunConfig.from_dict(raw)


def save_config(cfg: RunConfig, path: str | Path) -> None:
    try:
        Path(path).write_text(canonical_json(cfg.to_dict()) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IOFailure(f"cannot write config {path}: {exc}") from exc


def _coerce(value: str):
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        return value


def apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    """Apply ``dotted.path=value`` overrides on top of a config."""
    raw = cfg.to_dict()
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, value = item.split("=", 1)
        parts = key.strip().split(".")
        node = raw
        for p in parts[:-1]:
            if p not in node or not isinstance(node[p], dict):
                raise ConfigError(f"unknown config path {key!r}")
            node = node[p]
        leaf = parts[-1]
        if leaf not in node:
            raise ConfigError(f"unknown config key {key!r}")
        node[leaf] = _coerce(value.strip())
    return RunConfig.from_dict(raw)


def default_config(model: str) -> RunConfig:
    if model == "drum":
        return RunConfig(model="drum", mass=0.0, n_max=8, surface_order=128, volume_order=160)
    if model == "slab":
        return RunConfig(
            model="slab",
            mass=1.0,
            slab_lifetime=2.0,
            n_max=4,
            surface_order=128,
            volume_order=160,
        )
    raise ConfigError(f"unknown model {model!r}")


def with_updates(cfg: RunConfig, **kwargs) -> RunConfig:
    return replace(cfg, **kwargs)
