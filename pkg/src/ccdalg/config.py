"""Settings shared by the CLI and the MCP server.

Values come from, in increasing priority: the defaults below, a ``.env`` file,
``CCDALG_*`` environment variables and finally command-line flags.
"""

import logging
import os
from pathlib import Path

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, field_validator

from ccdalg.errors import CcdAlgError

logger = logging.getLogger(__name__)

ENV_PREFIX = "CCDALG_"


class Settings(BaseModel):
    catalog_path: str = "data/catalog.json"
    seed: int = 0
    log_level: str = "WARNING"
    workers: int = Field(default=1, ge=1)
    # candidate generator assignments per isomorphism search
    iso_search_limit: int = Field(default=200_000, ge=1)
    action_grid_points: int = Field(default=120, ge=100)
    almost_jordan_grid: int = Field(default=64, ge=1)
    property_cases: int = Field(default=200, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level


def load_settings(env_file: str | Path | None = None) -> Settings:
    """Read settings from a ``.env`` file and the ``CCDALG_`` environment.

    Args:
        env_file: Path of the ``.env`` file; ``.env`` in the working directory
            when omitted. A missing file is not an error.

    Raises:
        CcdAlgError: If a value does not validate.
    """
    path = Path(env_file) if env_file is not None else Path(".env")
    values: dict[str, str] = {}
    if path.is_file():
        values.update({k: v for k, v in dotenv_values(path).items() if v is not None})
        logger.debug(f"read settings from {path}")
    values.update(os.environ)
    fields = Settings.model_fields
    raw = {}
    for key, value in values.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = key[len(ENV_PREFIX) :].lower()
        if name in fields:
            raw[name] = value
        else:
            logger.warning(f"ignoring unknown setting {key}")
    try:
        return Settings.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise CcdAlgError(f"invalid setting {ENV_PREFIX}{str(first['loc'][0]).upper()}: {first['msg']}")
