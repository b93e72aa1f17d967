"""Configuration: a small TOML file plus environment-variable overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

ENV_PLANNER_URL = "GEOAGENT_PLANNER_URL"
ENV_SQLGEN_URL = "GEOAGENT_SQLGEN_URL"
ENV_API_KEY = "GEOAGENT_API_KEY"


@dataclass
class BackendConfig:
    url: str | None = None
    model: str = "default"
    timeout: float = 60.0
    max_retries: int = 3
    backoff_base: float = 0.5


@dataclass
class AppConfig:
    store_path: str = "geoagent.db"
    artifact_root: str = "artifacts"
    geography_path: str | None = None
    holidays_path: str | None = None
    synonyms_path: str | None = None
    budget: int = 12
    max_retries: int = 3
    observation_limit: int = 2000
    planner: BackendConfig = field(default_factory=BackendConfig)
    sql_generator: BackendConfig = field(default_factory=BackendConfig)
    api_key: str | None = None
    replay_dir: str | None = None
    record_dir: str | None = None
    suite_path: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> "AppConfig":
        cfg = cls()
        store = raw.get("store", {})
        cfg.store_path = store.get("path", cfg.store_path)
        cfg.artifact_root = store.get("artifacts", cfg.artifact_root)

        knowledge = raw.get("knowledge", {})
        cfg.geography_path = knowledge.get("geography")
        cfg.holidays_path = knowledge.get("holidays")
        cfg.synonyms_path = knowledge.get("synonyms")

        agent = raw.get("agent", {})
        cfg.budget = int(agent.get("budget", cfg.budget))
        cfg.max_retries = int(agent.get("max_retries", cfg.max_retries))
        cfg.observation_limit = int(agent.get("observation_limit", cfg.observation_limit))

        backends = raw.get("backends", {})
        for role, target in (("planner", cfg.planner), ("sql_generator", cfg.sql_generator)):
            section = backends.get(role, {})
            target.url = section.get("url", target.url)
            target.model = section.get("model", target.model)
            target.timeout = float(section.get("timeout", target.timeout))
            target.max_retries = int(section.get("max_retries", target.max_retries))
            target.backoff_base = float(section.get("backoff_base", target.backoff_base))

        replay = raw.get("replay", {})
        cfg.replay_dir = replay.get("dir")
        cfg.record_dir = replay.get("record_dir")

        bench = raw.get("bench", {})
        cfg.suite_path = bench.get("suite")
        return cfg


def load_config(path: str | Path | None = None) -> AppConfig:
    """Read the config file (if any), then apply environment overrides."""
    raw: dict = {}
    if path is not None:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    cfg = AppConfig.from_dict(raw)
    if os.environ.get(ENV_PLANNER_URL):
        cfg.planner.url = os.environ[ENV_PLANNER_URL]
    if os.environ.get(ENV_SQLGEN_URL):
        cfg.sql_generator.url = os.environ[ENV_SQLGEN_URL]
    if os.environ.get(ENV_API_KEY):
        cfg.api_key = os.environ[ENV_API_KEY]
    return cfg
