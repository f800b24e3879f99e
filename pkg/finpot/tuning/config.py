"""Fine-tuning configuration."""

import itertools
from collections.abc import Mapping, Sequence
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..config import ModelProfile, load_profiles
from .errors import TuningConfigError

LEARNING_RATES: dict[str, float] = {
    "mistral": 2.5e-5,
    "orca-2": 5e-5,
    "phi-3": 1e-4,
}


class FinetuneConfig(BaseModel):
    """LoRA fine-tuning hyperparameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    model_profile: str
    base_model: str
    lora_r: int = Field(default=512, gt=0)
    lora_alpha: int = Field(default=1024, gt=0)
    lora_dropout: float = Field(default=0.1, ge=0, lt=1)
    lora_bias: Literal["none", "all", "lora_only"] = "none"
    task_type: str = "CAUSAL_LM"
    target_modules: str | list[str] = "all-linear"
    epochs: int = Field(default=6, gt=0)
    batch_size: int = Field(default=1, gt=0)
    grad_accum_steps: int = Field(default=1, gt=0)
    learning_rate: float = Field(gt=0)
    bf16: bool = True
    seed: int = 0


def _resolve(profile: ModelProfile | str) -> ModelProfile:
    if isinstance(profile, ModelProfile):
        return profile
    profiles = load_profiles()
    if profile not in profiles:
        raise TuningConfigError(f"Unknown model profile {profile!r}")
    return profiles[profile]


def make_training_config(
    profile: ModelProfile | str, overrides: Mapping[str, Any] | None = None
) -> FinetuneConfig:
    """Build a fine-tuning config from defaults, the profile's family and overrides.

    Args:
        profile: Student profile or its id in the packaged profiles
        overrides: Field overrides

    Returns:
        Validated configuration

    Raises:
        TuningConfigError: If the profile is unknown or a value is invalid
    """
    student = _resolve(profile)
    if student.family not in LEARNING_RATES:
        raise TuningConfigError(
            f"Profile {student.id!r} has no known model family (got {student.family!r})"
        )
    values: dict[str, Any] = {
        "model_profile": student.id,
        "base_model": student.hf_name or student.model_id,
        "learning_rate": LEARNING_RATES[student.family],
    }
    values.update(overrides or {})
    try:
        return FinetuneConfig.model_validate(values)
    except ValidationError as e:
        raise TuningConfigError(str(e)) from e


def make_sweep_configs(
    profile: ModelProfile | str,
    grid: Mapping[str, Sequence[Any]],
    overrides: Mapping[str, Any] | None = None,
) -> list[FinetuneConfig]:
    """Build one config per combination of the grid's override values.

    Example: ``{"lora_r": [64, 256, 512, 1024]}`` yields four configs.
    """
    keys = list(grid)
    configs = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        values = {**(overrides or {}), **dict(zip(keys, combo, strict=True))}
        configs.append(make_training_config(profile, values))
    return configs
