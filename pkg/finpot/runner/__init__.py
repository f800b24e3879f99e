"""Experiment orchestration: run configuration, stages, artifacts and reports."""

from .artifacts import STAGE_DIRS, RunArtifacts
from .backends import Backends, MockResponder, create_client
from .config import (
    STAGES,
    CurationSettings,
    DatasetSource,
    RunConfig,
    Seeds,
    StageName,
    build_run_config,
    load_run_config,
    validate_dev_splits,
    validate_profiles,
)
from .errors import MissingArtifactError, RunConfigError, StageError
from .pipeline import config_slice, prepare_run, run_ablation, run_pipeline
from .report import emit_report
from .specs import (
    TrainingSetPart,
    TrainingSetSpec,
    default_training_sets,
    parse_training_set,
    select_training_samples,
)
from .stages import EvalTarget, StageContext, eval_targets

__all__ = [
    "STAGES",
    "STAGE_DIRS",
    "Backends",
    "CurationSettings",
    "DatasetSource",
    "EvalTarget",
    "MissingArtifactError",
    "MockResponder",
    "RunArtifacts",
    "RunConfig",
    "RunConfigError",
    "Seeds",
    "StageContext",
    "StageError",
    "StageName",
    "TrainingSetPart",
    "TrainingSetSpec",
    "build_run_config",
    "config_slice",
    "create_client",
    "default_training_sets",
    "emit_report",
    "eval_targets",
    "load_run_config",
    "parse_training_set",
    "prepare_run",
    "run_ablation",
    "run_pipeline",
    "select_training_samples",
    "validate_dev_splits",
    "validate_profiles",
]
