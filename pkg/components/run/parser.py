"""Flat key=value run configuration files."""

import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional

from pydantic import ValidationError

from components.core.config import get_settings
from components.core.exceptions import ArtifactError, ConfigError
from components.run.schemas import DEFER_CONSISTENCY, RunConfig, consistency_errors

logger = logging.getLogger(__name__)

# key written for each field; everything else uses the field name
KEY_ALIASES = {"table_size": "r", "ball_radius": "R"}


def _error_key(location) -> str:
    parts = [str(part) for part in location if not isinstance(part, int)]
    return ".".join(parts) or "config"


def validation_errors(error: ValidationError) -> List[Dict[str, str]]:
    """Flatten pydantic errors to {"key", "message"} rows."""
    errors = []
    for item in error.errors():
        message = item["msg"]
        if message.startswith("Value error, "):
            message = message[len("Value error, "):]
        errors.append({"key": _error_key(item["loc"]), "message": message})
    return errors


def build_config(values: Mapping[str, object]) -> RunConfig:
    """
    Validate raw values into a RunConfig.

    Field errors and cross-field errors are reported together: keys that fail
    on their own fall back to defaults so the remaining checks still run.

    Raises:
        ConfigError: with every validation error found
    """
    values = {KEY_ALIASES.get(key, key): value for key, value in values.items()}
    context = {DEFER_CONSISTENCY: True}
    errors: List[Dict[str, str]] = []
    try:
        config = RunConfig.model_validate(values, context=context)
    except ValidationError as error:
        errors = validation_errors(error)
    failed = {row["key"].split(".")[0] for row in errors}
    if errors:
        remaining = {key: value for key, value in values.items() if key not in failed}
        config = RunConfig.model_validate(remaining, context=context)
    errors.extend(consistency_errors(config, failed))
    if errors:
        raise ConfigError(errors)
    return config


def read_pairs(text: str) -> Dict[str, str]:
    """
    Parse key=value lines; blank lines and lines starting with # are skipped.

    Raises:
        ConfigError: for malformed or duplicated lines
    """
    errors = []
    values: Dict[str, str] = {}
    for line_num, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, separator, value = line.partition("=")
        key = key.strip()
        if not separator or not key:
            errors.append({"key": f"line {line_num}", "message": f"expected key=value, got {line!r}"})
            continue
        if key in values:
            errors.append({"key": key, "message": f"duplicate key on line {line_num}"})
            continue
        values[key] = value.strip()
    if errors:
        raise ConfigError(errors)
    return values


def parse_config(text: str, overrides: Optional[Mapping[str, object]] = None) -> RunConfig:
    """
    Parse configuration text; `overrides` (command-line flags) win over the file.

    Raises:
        ConfigError: listing every malformed line or every invalid value
    """
    values: Dict[str, object] = {
        KEY_ALIASES.get(key, key): value for key, value in read_pairs(text).items()
    }
    for key, value in (overrides or {}).items():
        if value is not None:
            values[KEY_ALIASES.get(key, key)] = value
    config = build_config(values)
    logger.debug("parsed configuration: %s", config)
    return config


def load_config(path: Path, overrides: Optional[Mapping[str, object]] = None) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ArtifactError(f"cannot read configuration ({error.strerror})", str(path)) from error
    return parse_config(text, overrides)


def _format(value) -> str:
    if isinstance(value, float):
        return get_settings().FLOAT_FORMAT % value
    if isinstance(value, (list, tuple)):
        return ",".join(_format(item) for item in value)
    return str(value)


def serialize_config(config: RunConfig) -> str:
    """key=value text that parses back to an equal RunConfig; unset optional fields are omitted."""
    lines = []
    for name, value in config.model_dump().items():
        if value is None:
            continue
        lines.append(f"{KEY_ALIASES.get(name, name)}={_format(value)}")
    return "\n".join(lines) + "\n"
