"""Session configuration with a fixed precedence: flags > environment > file.

The file is ``curation.toml`` in the working directory (or wherever
``--config`` points). It holds the durable choices: where the store lives,
how the language model is reached, and which dynamic wrappers are enabled.
Environment variables override the file for a shell; command flags override
everything for one invocation. Paths found in the file resolve relative to
the file itself, so a project checkout works from any directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - python 3.10
    import tomli as tomllib

from ..agents.extract import ExtractStrategy
from ..errors import ParseError
from ..providers import DEFAULT_MOCK_DIMENSION, ProviderConfig, ProviderKind
from ..sources.records import IMPLEMENTED_WRAPPERS

CONFIG_FILE = "curation.toml"
DEFAULT_PORT = 8910
DEFAULT_DB_PATH = "curation-store"

# one variable per top-level setting; the provider block is file/flag only
ENV_VARS = {
    "db_path": "CURATION_DB_PATH",
    "model_name": "CURATION_MODEL_NAME",
    "active_collection": "CURATION_ACTIVE_COLLECTION",
    "background_source": "CURATION_BACKGROUND_SOURCE",
    "extraction_strategy": "CURATION_EXTRACTION_STRATEGY",
    "port": "CURATION_PORT",
}


@dataclass
class SessionConfig:
    """Everything an engine needs to come up, resolved and validated."""

    db_path: Path = Path(DEFAULT_DB_PATH)
    model_name: str = "default"
    active_collection: "str | None" = None
    background_source: "str | None" = None
    extraction_strategy: ExtractStrategy = ExtractStrategy.BASIC
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    wrappers: "tuple[str, ...]" = IMPLEMENTED_WRAPPERS
    http_replay_dir: "Path | None" = None
    port: int = DEFAULT_PORT

    def __post_init__(self):
        self.db_path = Path(self.db_path)
        if isinstance(self.extraction_strategy, str):
            self.extraction_strategy = ExtractStrategy.parse(self.extraction_strategy)
        self.wrappers = tuple(self.wrappers)
        if self.background_source and self.background_source not in self.wrappers:
            raise ValueError(
                f"background_source {self.background_source!r} is not an enabled "
                f"wrapper (have: {', '.join(self.wrappers)})"
            )
        if self.port < 1 or self.port > 65535:
            raise ValueError(f"port {self.port} out of range")
        # the session model name is what the provider must resolve
        self.provider.model_name = self.model_name

    def payload(self) -> dict[str, Any]:
        return {
            "model_name": self.model_name,
            "active_collection": self.active_collection,
            "background_source": self.background_source,
            "extraction_strategy": self.extraction_strategy.value,
            "db_path": str(self.db_path),
            "wrappers": list(self.wrappers),
            "port": self.port,
        }


def _read_config_file(path: Path) -> dict[str, Any]:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read config file {path}: {exc}")
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"config file {path} is not valid TOML: {exc}")


def _provider_from_mapping(data: Mapping[str, Any], base: Path) -> ProviderConfig:
    kind_raw = str(data.get("kind", ProviderKind.MOCK_REPLAY.value))
    try:
        kind = ProviderKind(kind_raw)
    except ValueError:
        choices = ", ".join(k.value for k in ProviderKind)
        raise ParseError(f"unknown provider kind {kind_raw!r} (choices: {choices})")
    fixtures = data.get("fixtures_path")
    if fixtures:
        fixtures = str(base / fixtures) if not Path(fixtures).is_absolute() else str(fixtures)
    return ProviderConfig(
        kind=kind,
        endpoint=data.get("endpoint") or None,
        api_key_env=str(data.get("api_key_env", "CURATION_LLM_API_KEY")),
        model_name=str(data.get("model_name", "default")),
        embed_dimension=int(data.get("embed_dimension", DEFAULT_MOCK_DIMENSION)),
        fixtures_path=fixtures,
        strict_fixtures=bool(data.get("strict_fixtures", True)),
    )


def load_config(
    flags: "Mapping[str, Any] | None" = None,
    *,
    env: "Mapping[str, str] | None" = None,
    config_path: "str | Path | None" = None,
) -> SessionConfig:
    """Resolve a session config from flags, the environment, and curation.toml.

    ``flags`` entries set to None count as "not given". An explicit
    ``config_path`` must exist; the default path is simply skipped when absent.
    """
    given = {k: v for k, v in (flags or {}).items() if v is not None}
    env = os.environ if env is None else env

    path = Path(config_path) if config_path else Path(CONFIG_FILE)
    if config_path and not path.exists():
        raise ParseError(f"config file {path} does not exist")
    file_data: dict[str, Any] = _read_config_file(path) if path.exists() else {}
    base = path.parent if path.exists() else Path(".")

    def pick(key: str, default=None):
        if key in given:
            return given[key]
        env_name = ENV_VARS.get(key)
        if env_name and env.get(env_name):
            return env[env_name]
        if key in file_data:
            return file_data[key]
        return default

    db_path = Path(pick("db_path", DEFAULT_DB_PATH))
    if "db_path" not in given and not (ENV_VARS["db_path"] in env and env[ENV_VARS["db_path"]]):
        if "db_path" in file_data and not db_path.is_absolute():
            db_path = base / db_path

    wrapper_block = file_data.get("wrappers", {})
    if not isinstance(wrapper_block, Mapping):
        raise ParseError("[wrappers] must be a table")
    enabled = wrapper_block.get("enabled", list(IMPLEMENTED_WRAPPERS))
    replay_dir = given.get("http_replay_dir") or wrapper_block.get("replay_dir")
    if replay_dir is not None:
        replay_dir = Path(replay_dir)
        if "http_replay_dir" not in given and not replay_dir.is_absolute():
            replay_dir = base / replay_dir

    provider_block = file_data.get("provider", {})
    if not isinstance(provider_block, Mapping):
        raise ParseError("[provider] must be a table")
    provider = _provider_from_mapping(provider_block, base)

    model_name = pick("model_name", provider.model_name)

    return SessionConfig(
        db_path=db_path,
        model_name=str(model_name),
        active_collection=pick("active_collection"),
        background_source=pick("background_source") or None,
        extraction_strategy=pick("extraction_strategy", ExtractStrategy.BASIC),
        provider=provider,
        wrappers=tuple(str(w) for w in enabled),
        http_replay_dir=replay_dir,
        port=int(pick("port", DEFAULT_PORT)),
    )
