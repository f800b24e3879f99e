"""Configuration management module."""

import logging
import tomllib
from dataclasses import dataclass
from importlib import resources
from os import getenv
from pathlib import Path
from typing import Any, Literal

from dotenv import load_dotenv
from pydantic import ValidationError

from ..errors import FinpotError
from ..llm import BackendProfile

logger = logging.getLogger(__name__)

ModelRole = Literal["teacher", "student", "judge"]
ModelFamily = Literal["mistral", "orca-2", "phi-3"]

PACKAGED_PROFILES = "profiles.toml"


class ProfileError(FinpotError):
    """A model profile file is missing or invalid."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="PROFILE_ERROR")


class ModelProfile(BackendProfile):
    """A named backend profile with its role in the pipeline."""

    id: str
    role: ModelRole
    family: ModelFamily | None = None
    hf_name: str | None = None


@dataclass(frozen=True)
class Settings:
    """Process-level settings."""

    runs_dir: Path = Path("runs")
    cache_dir: Path = Path("runs/.cache")
    profiles_path: Path | None = None

    @classmethod
    def from_env(cls) -> "Settings":
        """Load settings from environment variables (after ``.env``)."""
        load_dotenv()
        runs_dir = Path(getenv("FINPOT_RUNS_DIR", "runs"))
        cache_dir = getenv("FINPOT_CACHE_DIR")
        profiles = getenv("FINPOT_PROFILES")
        return cls(
            runs_dir=runs_dir,
            cache_dir=Path(cache_dir) if cache_dir else runs_dir / ".cache",
            profiles_path=Path(profiles) if profiles else None,
        )


def parse_profiles(data: dict[str, Any], source: str = "<profiles>") -> dict[str, ModelProfile]:
    """Validate a profiles document: one table per profile id.

    Raises:
        ProfileError: If a table is not a valid profile
    """
    profiles: dict[str, ModelProfile] = {}
    for profile_id, table in data.items():
        if not isinstance(table, dict):
            raise ProfileError(f"{source}: profile {profile_id!r} must be a table")
        try:
            profiles[profile_id] = ModelProfile.model_validate({**table, "id": profile_id})
        except ValidationError as e:
            raise ProfileError(f"{source}: profile {profile_id!r} is invalid: {e}") from e
    return profiles


def load_profiles(path: str | Path | None = None) -> dict[str, ModelProfile]:
    """Load model profiles from a TOML file, or the packaged defaults.

    Args:
        path: Profiles file; None reads the packaged ``profiles.toml``

    Returns:
        Profiles by id

    Raises:
        ProfileError: If the file cannot be read or parsed
    """
    try:
        if path is None:
            text = resources.files(__package__).joinpath(PACKAGED_PROFILES).read_text("utf-8")
            source = PACKAGED_PROFILES
        else:
            text = Path(path).read_text(encoding="utf-8")
            source = str(path)
        data = tomllib.loads(text)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ProfileError(f"Cannot load profiles from {path or PACKAGED_PROFILES}: {e}") from e
    profiles = parse_profiles(data, source)
    logger.debug("Loaded %d model profiles from %s", len(profiles), source)
    return profiles


__all__ = [
    "PACKAGED_PROFILES",
    "ModelFamily",
    "ModelProfile",
    "ModelRole",
    "ProfileError",
    "Settings",
    "load_profiles",
    "parse_profiles",
]
