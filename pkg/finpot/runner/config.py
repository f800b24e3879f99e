"""Run configuration: a TOML document overridden by command-line flags."""

import tomllib
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..config import ModelProfile
from ..corpus import DEFAULT_SPLIT_PLANS, DatasetKind
from ..grading import MatchConfig
from .errors import RunConfigError
from .specs import TrainingSetSpec, default_training_sets, parse_training_set

StageName = Literal["ingest", "generate", "curate", "tune", "infer", "grade", "probe", "report"]

STAGES: tuple[StageName, ...] = (
    "ingest",
    "generate",
    "curate",
    "tune",
    "infer",
    "grade",
    "probe",
    "report",
)


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class DatasetSource(_Section):
    """Raw files of one dataset; any split file may be absent."""

    kind: DatasetKind
    train: str | None = None
    dev: str | None = None
    test: str | None = None
    dev_count: int | None = Field(default=None, ge=0)


class Seeds(_Section):
    split: int = 0
    sampling: int = 0


class CurationSettings(_Section):
    retry_budget: int = Field(default=0, ge=0)
    retry_temperature: float = Field(default=0.7, ge=0)


class RunConfig(_Section):
    """Everything a pipeline run reads."""

    run_id: str
    datasets: list[DatasetSource] = Field(min_length=1)
    teacher: str = "gpt-4-teacher"
    students: list[str] = Field(default_factory=list)
    judge: str = "gpt-4-judge"
    stages: list[StageName] = Field(default_factory=lambda: list(STAGES))
    seeds: Seeds = Seeds()
    match: MatchConfig = MatchConfig()
    finetune: dict[str, Any] = Field(default_factory=dict)
    sandbox: dict[str, Any] = Field(default_factory=dict)
    cache_dir: str | None = None
    runs_dir: str = "runs"
    profiles: str | None = None
    limit: int | None = Field(default=None, ge=0)
    mock: bool = False
    trainer: Literal["recording", "peft"] | None = None
    training_sets: list[str] = Field(default_factory=list)
    eval_datasets: dict[str, list[DatasetKind]] = Field(default_factory=dict)
    curation: CurationSettings = CurationSettings()

    @field_validator("run_id")
    @classmethod
    def _safe_run_id(cls, value: str) -> str:
        if not value or "/" in value or value in {".", ".."}:
            raise ValueError(f"run_id {value!r} is not a valid directory name")
        return value

    @field_validator("datasets")
    @classmethod
    def _unique_kinds(cls, value: list[DatasetSource]) -> list[DatasetSource]:
        kinds = [d.kind for d in value]
        if len(set(kinds)) != len(kinds):
            raise ValueError(f"dataset kinds repeat: {kinds}")
        return value

    @property
    def dataset_kinds(self) -> list[DatasetKind]:
        return [d.kind for d in self.datasets]

    def source(self, kind: str) -> DatasetSource | None:
        return next((d for d in self.datasets if d.kind == kind), None)

    def training_set_specs(self) -> list[TrainingSetSpec]:
        if not self.training_sets:
            return default_training_sets(self.dataset_kinds)
        return [parse_training_set(text) for text in self.training_sets]

    def eval_kinds(self, spec: TrainingSetSpec) -> list[DatasetKind]:
        """Datasets a spec's checkpoints are evaluated on, dev selection included."""
        kinds = self.eval_datasets.get(spec.text) or self.eval_datasets.get(spec.label) or spec.kinds
        return [k for k in kinds if k in self.dataset_kinds]

    def expects_dev_split(self, kind: str) -> bool:
        """Whether ingestion can give ``kind`` a non-empty dev split."""
        source = self.source(kind)
        if source is None or self.limit == 0:
            return False
        plan = DEFAULT_SPLIT_PLANS[source.kind]
        dev_count = plan.dev_count if source.dev_count is None else source.dev_count
        if dev_count > 0:
            return source.train is not None
        return plan.uses_predefined_test and source.dev is not None

    @property
    def trainer_name(self) -> str:
        return self.trainer or ("recording" if self.mock else "peft")

    def run_dir(self) -> Path:
        return Path(self.runs_dir) / self.run_id


def _set_dotted(data: dict[str, Any], dotted: str, value: Any) -> None:
    *parents, leaf = dotted.split(".")
    node = data
    for key in parents:
        node = node.setdefault(key, {})
    node[leaf] = value


def build_run_config(
    document: Mapping[str, Any] | None = None, overrides: Mapping[str, Any] | None = None
) -> RunConfig:
    """Validate a config document with flag overrides applied on top.

    Args:
        document: Parsed config file contents
        overrides: Flag values by dotted key (e.g. ``seeds.split``); None
            values are ignored

    Raises:
        RunConfigError: If the merged document is invalid
    """
    data: dict[str, Any] = {k: v for k, v in (document or {}).items()}
    for key, value in (overrides or {}).items():
        if value is not None:
            _set_dotted(data, key, value)
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise RunConfigError(f"Invalid run configuration: {e}") from e


def load_run_config(path: str | Path | None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    """Load a TOML run configuration and apply flag overrides.

    Raises:
        RunConfigError: If the file cannot be read or the result is invalid
    """
    document: dict[str, Any] = {}
    if path is not None:
        try:
            document = tomllib.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, tomllib.TOMLDecodeError) as e:
            raise RunConfigError(f"Cannot read run configuration {path}: {e}") from e
    return build_run_config(document, overrides)


def validate_profiles(config: RunConfig, profiles: Mapping[str, ModelProfile]) -> None:
    """Check every profile the config references exists with the right role.

    Raises:
        RunConfigError: If a profile is unknown or has the wrong role
    """
    wanted = [(config.teacher, "teacher"), (config.judge, "judge")]
    wanted += [(s, "student") for s in config.students]
    for profile_id, role in wanted:
        profile = profiles.get(profile_id)
        if profile is None:
            raise RunConfigError(f"Unknown model profile {profile_id!r}").with_context(
                known=sorted(profiles)
            )
        if profile.role != role:
            raise RunConfigError(f"Profile {profile_id!r} is a {profile.role}, expected a {role}")
        if role == "student" and profile.family is None:
            raise RunConfigError(f"Student profile {profile_id!r} has no model family")
    for name, kinds in config.eval_datasets.items():
        missing = [k for k in kinds if k not in config.dataset_kinds]
        if missing:
            raise RunConfigError(f"Evaluation datasets {missing} of {name!r} are not configured")



def validate_dev_splits(config: RunConfig) -> None:
    """Check every training set has a dev split to select its checkpoint on.

    Raises:
        RunConfigError: If fine-tuned students are graded but a training set's
            evaluation datasets can have no dev records
    """
    if not config.students or "grade" not in config.stages:
        return
    for spec in config.training_set_specs():
        kinds = config.eval_kinds(spec)
        if not any(config.expects_dev_split(k) for k in kinds):
            raise RunConfigError(
                f"Training set {spec.text!r} has no dev split to select a checkpoint on"
            ).with_context(datasets=kinds, limit=config.limit)
