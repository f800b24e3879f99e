"""Run orchestration: stages in order, skipped when their inputs are unchanged."""

import logging
import shutil
import time
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

from ..config import ModelProfile, Settings, load_profiles
from ..errors import FinpotError
from ..llm import LLMClient
from ..sandbox import SandboxPool, build_limits
from ..storage import read_json
from ..tuning import RecordingTrainer, TrainerBackend, create_trainer
from .artifacts import RunArtifacts, started_now
from .backends import Backends, create_client
from .config import STAGES, RunConfig, StageName, validate_dev_splits, validate_profiles
from .errors import RunConfigError, StageError
from .report import REPORT_JSON, emit_report
from .stages import STAGE_FUNCTIONS, StageContext, ingest_inputs
from .specs import parse_training_set

logger = logging.getLogger(__name__)

STAGE_INPUTS: dict[str, tuple[str, ...]] = {
    "ingest": (),
    "generate": ("ingest",),
    "curate": ("ingest", "generate"),
    "tune": ("curate",),
    "infer": ("ingest", "curate", "tune"),
    "grade": ("ingest", "tune", "infer"),
    "probe": ("ingest", "curate", "tune", "infer", "grade"),
    "report": ("tune", "grade", "probe"),
}


def _profile_dump(profiles: Mapping[str, ModelProfile], ids: Sequence[str]) -> dict[str, Any]:
    return {i: profiles[i].model_dump(mode="json") for i in ids}


def config_slice(stage: str, config: RunConfig, profiles: Mapping[str, ModelProfile]) -> dict[str, Any]:
    """The configuration values a stage reads."""
    dump = config.model_dump(mode="json")
    students = _profile_dump(profiles, config.students)
    match stage:
        case "ingest":
            return {"datasets": dump["datasets"], "split_seed": config.seeds.split, "limit": config.limit}
        case "generate":
            return {"teacher": _profile_dump(profiles, [config.teacher]), "mock": config.mock}
        case "curate":
            return {
                "teacher": _profile_dump(profiles, [config.teacher]),
                "match": dump["match"],
                "sandbox": dump["sandbox"],
                "curation": dump["curation"],
                "mock": config.mock,
            }
        case "tune":
            return {
                "students": students,
                "finetune": dump["finetune"],
                "training_sets": config.training_sets,
                "sampling_seed": config.seeds.sampling,
                "trainer": config.trainer_name,
            }
        case "infer":
            return {"students": students, "eval_datasets": dump["eval_datasets"], "mock": config.mock}
        case "grade":
            return {"match": dump["match"], "sandbox": dump["sandbox"]}
        case "probe":
            return {"judge": _profile_dump(profiles, [config.judge]), "mock": config.mock}
        case _:
            return {"training_sets": config.training_sets}


async def _report_stage(ctx: StageContext) -> None:
    emit_report(ctx.artifacts)


def _cache_dir(config: RunConfig) -> Path | None:
    if config.cache_dir:
        return Path(config.cache_dir)
    if config.mock:
        return None
    return Settings.from_env().cache_dir


def prepare_run(
    config: RunConfig, profiles: Mapping[str, ModelProfile] | None = None
) -> tuple[dict[str, ModelProfile], RunArtifacts]:
    """Validate profiles and training-set specs before any stage runs.

    Raises:
        RunConfigError: If a profile is unknown, a spec is malformed or a
            graded training set has no dev split
    """
    resolved = dict(profiles) if profiles is not None else load_profiles(config.profiles)
    validate_profiles(config, resolved)
    for text in config.training_sets:
        spec = parse_training_set(text)
        missing = [k for k in spec.kinds if k not in config.dataset_kinds]
        if missing:
            raise RunConfigError(f"Training set {text!r} uses unconfigured datasets {missing}")
    validate_dev_splits(config)
    return resolved, RunArtifacts(config.run_dir())


async def run_pipeline(
    config: RunConfig,
    *,
    profiles: Mapping[str, ModelProfile] | None = None,
    stages: Sequence[StageName] | None = None,
    client: LLMClient | None = None,
    trainer: TrainerBackend | None = None,
) -> RunArtifacts:
    """Run the configured stages in pipeline order.

    Args:
        config: Run configuration
        profiles: Model profiles; defaults to the configured or packaged file
        stages: Stages to run; defaults to ``config.stages``
        client: LLM client to register backends with
        trainer: Trainer backend; defaults to the configured one

    Returns:
        The run's artifacts

    Raises:
        RunConfigError: If the configuration is invalid (before any stage)
        StageError: If a stage fails; files written so far are kept
    """
    resolved, artifacts = prepare_run(config, profiles)
    wanted = set(stages or config.stages)
    artifacts.start_run(config.model_dump(mode="json"))

    own_client = client is None
    client = client or create_client(_cache_dir(config))
    ctx = StageContext(
        config=config,
        profiles=resolved,
        artifacts=artifacts,
        backends=Backends(client, resolved, mock=config.mock),
        pool=SandboxPool(build_limits(config.sandbox)),
        trainer=trainer or (RecordingTrainer() if config.mock else create_trainer(config.trainer_name)),
    )
    functions = {**STAGE_FUNCTIONS, "report": _report_stage}

    try:
        for stage in STAGES:
            if stage not in wanted:
                continue
            inputs = [artifacts.stage_dir(s) for s in STAGE_INPUTS[stage]]
            if stage == "ingest":
                inputs += ingest_inputs(config)
            fingerprint = artifacts.stage_fingerprint(config_slice(stage, config, resolved), inputs)
            if artifacts.is_current(stage, fingerprint):
                logger.info("Stage %s is up to date, skipping", stage)
                continue

            logger.info("Stage %s started", stage)
            started, clock = started_now(), time.monotonic()
            shutil.rmtree(artifacts.stage_dir(stage), ignore_errors=True)
            try:
                await functions[stage](ctx)
            except StageError as e:
                artifacts.record_stage(stage, fingerprint, "failed", started, time.monotonic() - clock, str(e))
                raise
            except FinpotError as e:
                e.with_context(stage=e.stage or stage)
                artifacts.record_stage(stage, fingerprint, "failed", started, time.monotonic() - clock, str(e))
                raise StageError(stage, f"[{e.code}] {e}", record_id=e.record_id) from e
            except Exception as e:
                artifacts.record_stage(stage, fingerprint, "failed", started, time.monotonic() - clock, repr(e))
                raise StageError(stage, repr(e)) from e
            artifacts.record_stage(stage, fingerprint, "done", started, time.monotonic() - clock)
            logger.info("Stage %s finished in %.1fs", stage, time.monotonic() - clock)
    finally:
        if own_client:
            await client.close()
    return artifacts


async def run_ablation(
    base_config: RunConfig,
    grid: Sequence[str],
    *,
    eval_kinds: Sequence[str] = ("finqa", "convfinqa"),
    profiles: Mapping[str, ModelProfile] | None = None,
    client: LLMClient | None = None,
    trainer: TrainerBackend | None = None,
) -> dict[str, Any]:
    """Train one adapter per training-set spec and compare them on shared test sets.

    Args:
        base_config: Configuration the grid is applied to
        grid: Training-set specs, e.g. ``["FinQA:1500", "FinQA:1000 + ConvFinQA:500"]``
        eval_kinds: Datasets every tuned model is evaluated on

    Returns:
        The ablation table: per student, per spec, per dataset test accuracy
    """
    if not grid:
        raise RunConfigError("Ablation grid is empty")
    kinds = [k for k in eval_kinds if k in base_config.dataset_kinds]
    config = RunConfig.model_validate(
        {
            **base_config.model_dump(mode="json"),
            "training_sets": list(grid),
            "eval_datasets": {spec: kinds for spec in grid},
        }
    )
    artifacts = await run_pipeline(
        config, profiles=profiles, stages=STAGES, client=client, trainer=trainer
    )
    report = read_json(artifacts.require(artifacts.report / REPORT_JSON, "report"))
    return report["tables"]["ablation"]
