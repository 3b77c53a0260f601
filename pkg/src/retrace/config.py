"""Pipeline configuration: one TOML or JSON file, env-var overrides.

Unknown keys are rejected at load so typos fail loudly instead of
silently running with defaults. Environment overrides use the RETRACE_
prefix with double underscores for nesting, e.g.
RETRACE_LDA__SEED=7 or RETRACE_AFFINITY_THRESHOLD=3.
"""

from __future__ import annotations

import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .jsonio import read_json

ENV_PREFIX = "RETRACE_"


@dataclass
class PathsConfig:
    records: str = "out/records.json"
    rejects: str = "out/rejects.json"
    summary: str = "out/summary.json"
    cache_dir: str = "out/cache"
    citations: str = "out/citations.json"
    entities: str = "out/entities.json"
    affinity: str = "out/affinity.json"
    periods: str = "out/periods.json"
    corpus: str = "out/corpus.json"
    model: str = "out/model.json"
    report: str = "out/report.json"
    bundle_dir: str = "out/bundle"
    store: str = "out/annotations.jsonl"
    contexts: str = "out/contexts.json"


@dataclass
class SourceConfig:
    name: str
    kind: str  # coci_fixture | graph_fixture | coci_live
    path: str | None = None
    base_url: str | None = None

    def __post_init__(self) -> None:
        kinds = ("coci_fixture", "graph_fixture", "coci_live")
        if self.kind not in kinds:
            raise ConfigError(f"source {self.name!r}: unknown kind {self.kind!r} (expected one of {kinds})")
        if self.kind.endswith("_fixture") and not self.path:
            raise ConfigError(f"source {self.name!r}: fixture sources need a path")
        if self.kind == "coci_live" and not self.base_url:
            raise ConfigError(f"source {self.name!r}: live sources need a base_url")


@dataclass
class TokenizerConfig:
    extra_stopwords_file: str | None = None
    min_token_length: int = 2
    stemming: bool = True
    lemmatization: bool = False
    min_count: int = 1


@dataclass
class LdaConfig:
    k: int = 10
    alpha: float | None = None
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0
    k_range: list[int] = field(default_factory=lambda: list(range(2, 21)))


@dataclass
class PipelineConfig:
    paths: PathsConfig = field(default_factory=PathsConfig)
    sources: list[SourceConfig] = field(default_factory=list)
    affinity_threshold: int = 2
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    lda: LdaConfig = field(default_factory=LdaConfig)
    relevance_lambda: float = 0.3

    def validate(self) -> None:
        if not 0.0 <= self.relevance_lambda <= 1.0:
            raise ConfigError(f"relevance_lambda must be in [0, 1], got {self.relevance_lambda}")
        if self.tokenizer.min_token_length < 1:
            raise ConfigError("tokenizer.min_token_length must be >= 1")
        if self.lda.k < 2:
            raise ConfigError("lda.k must be >= 2")
        names = [s.name for s in self.sources]
        if len(names) != len(set(names)):
            raise ConfigError("source names must be unique")


def _build(cls, data: Mapping, where: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")
    kwargs: dict[str, Any] = {}
    for f in fields(cls):
        if f.name not in data:
            continue
        value = data[f.name]
        if f.name == "paths":
            value = _build(PathsConfig, value, "paths")
        elif f.name == "tokenizer":
            value = _build(TokenizerConfig, value, "tokenizer")
        elif f.name == "lda":
            value = _build(LdaConfig, value, "lda")
        elif f.name == "sources":
            value = [_build(SourceConfig, s, f"sources[{i}]") for i, s in enumerate(value)]
        kwargs[f.name] = value
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad {where} section: {exc}")


def _read_config_file(path: Path) -> Mapping:
    if path.suffix.lower() == ".toml":
        if sys.version_info >= (3, 11):
            import tomllib
        else:
            import tomli as tomllib
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    return read_json(path)


def _apply_env(config: PipelineConfig, environ: Mapping[str, str]) -> None:
    for key, raw in sorted(environ.items()):
        if not key.startswith(ENV_PREFIX):
            continue
        dotted = key[len(ENV_PREFIX):].lower().split("__")
        target: Any = config
        for part in dotted[:-1]:
            if not hasattr(target, part):
                raise ConfigError(f"env override {key}: no config section {part!r}")
            target = getattr(target, part)
        leaf = dotted[-1]
        if not hasattr(target, leaf):
            raise ConfigError(f"env override {key}: no config field {leaf!r}")
        current = getattr(target, leaf)
        value: Any = raw
        if isinstance(current, bool):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif isinstance(current, int):
            value = int(raw)
        elif isinstance(current, float) or current is None and leaf == "alpha":
            value = float(raw)
        setattr(target, leaf, value)


def load_config(path: str | Path | None = None, environ: Mapping[str, str] | None = None) -> PipelineConfig:
    data: Mapping = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        data = _read_config_file(path)
    config = _build(PipelineConfig, data, "config")
    _apply_env(config, environ if environ is not None else os.environ)
    config.validate()
    return config


def config_to_dict(config: PipelineConfig) -> dict:
    return asdict(config)
