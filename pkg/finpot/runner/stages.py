"""Pipeline stages. Each stage reads earlier stages' files and writes only its own directory."""

import logging
from collections.abc import Iterator
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any

from ..config import ModelProfile
from ..corpus import (
    DEFAULT_SPLIT_PLANS,
    QARecord,
    SplitPlan,
    load_dataset,
    make_splits,
    read_records,
    truncate_splits,
    write_records,
    write_split_manifest,
)
from ..curation import audit, curate_with_retries, read_curated, write_curated, write_report
from ..grading import accuracy, grade
from ..llm import CompletionRequest, question_key
from ..prompts import (
    CuratedSample,
    PromptText,
    apply_chat_envelope,
    build_baseline_prompt,
    build_finetune_prompt,
    build_teacher_prompt,
    envelope_completion,
    judge_question,
    load_exemplars,
)
from ..probes import (
    ConceptProbeItem,
    EntityProbeItem,
    TargetMetrics,
    check_probe_inputs,
    concept_accuracy,
    entity_accuracy,
    executable_rate,
    rating_distribution,
    run_concept_probe,
    run_entity_probe,
)
from ..sandbox import ExecutionResult, ExtractionError, SandboxPool, extract_program
from ..storage import read_json, read_jsonl, write_json, write_jsonl
from ..structure import StructureError, first_concept_line
from ..tuning import (
    CheckpointRef,
    CheckpointSelectionError,
    TrainerBackend,
    make_training_config,
    run_finetune,
    select_best_checkpoint,
)
from .artifacts import RunArtifacts
from .backends import Backends
from .config import RunConfig
from .errors import RunConfigError, StageError
from .specs import TrainingSetSpec, select_training_samples

logger = logging.getLogger(__name__)

SPLITS = ("train", "dev", "test")
BASELINE_TARGETS = ("zero_shot", "few_shot", "epoch-0")
CHECKPOINTS_FILE = "checkpoints.json"
SELECTION_FILE = "selection.json"
SUMMARY_FILE = "summary.json"


@dataclass
class StageContext:
    """Everything a stage needs."""

    config: RunConfig
    profiles: dict[str, ModelProfile]
    artifacts: RunArtifacts
    backends: Backends
    pool: SandboxPool
    trainer: TrainerBackend

    def training_sets(self) -> list[TrainingSetSpec]:
        return self.config.training_set_specs()

    def eval_kinds(self, spec: TrainingSetSpec) -> list[str]:
        return list(self.config.eval_kinds(spec))

    def records(self, kind: str, split: str) -> list[QARecord]:
        path = self.artifacts.records / kind / f"{split}.jsonl"
        return read_records(self.artifacts.require(path, "ingest"))

    def all_records(self, kind: str) -> list[QARecord]:
        return [r for split in SPLITS for r in self.records(kind, split)]

    def curated(self, kind: str, split: str) -> list[CuratedSample]:
        path = self.artifacts.curated / kind / f"{split}.jsonl"
        return read_curated(self.artifacts.require(path, "curate"))

    def load_mock_answers(self) -> None:
        """Give the mock student the curated program of every question."""
        if self.backends.mock is None:
            return
        answers: dict[str, str] = {}
        for kind in self.config.dataset_kinds:
            questions = {r.id: r.question for r in self.all_records(kind)}
            for split in SPLITS:
                for sample in self.curated(kind, split):
                    answers[question_key(questions[sample.record_id])] = sample.teacher_program
        self.backends.set_student_answers(answers)


@dataclass(frozen=True)
class CheckpointSet:
    """Checkpoints of one student trained on one training set."""

    student: str
    spec: TrainingSetSpec
    refs: tuple[CheckpointRef, ...]


def _checkpoint_dir(ctx: StageContext, student: str, spec: TrainingSetSpec) -> Path:
    return ctx.artifacts.checkpoints / student / spec.label


def load_checkpoint_sets(ctx: StageContext) -> list[CheckpointSet]:
    """Checkpoints written by the tune stage, one set per student and training set."""
    sets = []
    for student in ctx.config.students:
        for spec in ctx.training_sets():
            path = _checkpoint_dir(ctx, student, spec) / CHECKPOINTS_FILE
            data = read_json(ctx.artifacts.require(path, "tune"))
            refs = tuple(CheckpointRef.from_dict(c) for c in data["checkpoints"])
            sets.append(CheckpointSet(student, spec, refs))
    return sets


# --- ingest -----------------------------------------------------------------


def ingest_inputs(config: RunConfig) -> list[Path]:
    return [Path(p) for d in config.datasets for p in (d.train, d.dev, d.test) if p]


async def ingest(ctx: StageContext) -> None:
    config = ctx.config
    dev_sizes: dict[str, int] = {}
    for source in config.datasets:
        records: list[QARecord] = []
        for split in SPLITS:
            path = getattr(source, split)
            if path:
                records += load_dataset(path, source.kind, split)
        default = DEFAULT_SPLIT_PLANS[source.kind]
        plan = SplitPlan(
            dev_count=default.dev_count if source.dev_count is None else source.dev_count,
            seed=config.seeds.split,
            uses_predefined_test=default.uses_predefined_test,
        )
        splits = truncate_splits(make_splits(records, plan), config.limit)
        out = ctx.artifacts.records / source.kind
        for split, rows in zip(SPLITS, splits, strict=True):
            write_records(rows, out / f"{split}.jsonl")
        write_split_manifest(splits, config.seeds.split, out / "splits.json")
        dev_sizes[source.kind] = len(splits.dev)
        logger.info(
            "%s splits: train %d, dev %d, test %d",
            source.kind,
            len(splits.train),
            len(splits.dev),
            len(splits.test),
        )

    if config.students and "grade" in config.stages:
        for spec in ctx.training_sets():
            kinds = ctx.eval_kinds(spec)
            if not any(dev_sizes.get(k) for k in kinds):
                raise RunConfigError(
                    f"Training set {spec.text!r} has no dev records to select a checkpoint on"
                ).with_context(datasets=kinds)


# --- teacher generation -----------------------------------------------------


def _teacher_requests(
    ctx: StageContext, records: list[QARecord], temperature: float = 0.0
) -> list[CompletionRequest]:
    profile = ctx.profiles[ctx.config.teacher]
    model_id = ctx.backends.model(profile.id)
    requests = []
    for record in records:
        prompt = build_teacher_prompt(
            record,
            load_exemplars(record.dataset_kind),
            include_hint=bool(record.gold_program),
        )
        requests.append(
            CompletionRequest(
                model_id=model_id,
                prompt=apply_chat_envelope(prompt, profile.envelope),
                temperature=temperature,
            )
        )
    return requests


async def generate(ctx: StageContext) -> None:
    client = ctx.backends.client
    for kind in ctx.config.dataset_kinds:
        records = ctx.all_records(kind)
        results = await client.complete_many(_teacher_requests(ctx, records))
        rows = [
            {
                "record_id": record.id,
                "split": record.split,
                "completion": result.text,
                "finish_reason": result.finish_reason,
            }
            for record, result in zip(records, results, strict=True)
        ]
        write_jsonl(ctx.artifacts.teacher / f"{kind}.jsonl", rows)
        logger.info("Teacher generated %d %s programs", len(rows), kind)


# --- curation ---------------------------------------------------------------


async def curate(ctx: StageContext) -> None:
    config = ctx.config
    client = ctx.backends.client

    async def regenerate(records: list[QARecord], attempt: int) -> dict[str, str]:
        requests = _teacher_requests(ctx, records, config.curation.retry_temperature)
        results = await client.complete_many(requests, use_cache=False)
        return {r.id: res.text for r, res in zip(records, results, strict=True)}

    for kind in config.dataset_kinds:
        path = ctx.artifacts.require(ctx.artifacts.teacher / f"{kind}.jsonl", "generate")
        outputs = {row["record_id"]: row["completion"] for row in read_jsonl(path)}
        out = ctx.artifacts.curated / kind
        for split in SPLITS:
            records = ctx.records(kind, split)
            samples, report, _ = await curate_with_retries(
                records,
                outputs,
                regenerate,
                retry_budget=config.curation.retry_budget,
                cfg=config.match,
                pool=ctx.pool,
            )
            failing = await audit(samples, records, config.match, ctx.pool)
            if failing:
                raise StageError(
                    "curate", f"{len(failing)} curated {kind} samples fail re-execution: {failing[:5]}"
                )
            write_curated(samples, out / f"{split}.jsonl")
            write_report(report, out / split)


# --- tuning -----------------------------------------------------------------


def _enveloped(samples: list[CuratedSample], profile: ModelProfile) -> list[CuratedSample]:
    if profile.envelope is None:
        return samples
    return [
        replace(
            s,
            prompt=apply_chat_envelope(PromptText(s.prompt, "finetune"), profile.envelope).text,
            completion=envelope_completion(s.completion, profile.envelope),
        )
        for s in samples
    ]


async def tune(ctx: StageContext) -> None:
    config = ctx.config
    specs = ctx.training_sets()
    needed = {k for spec in specs for k in spec.kinds}
    curated_train = {kind: ctx.curated(kind, "train") for kind in sorted(needed)}
    for spec in specs:
        samples = select_training_samples(spec, curated_train, config.seeds.sampling)
        logger.info("Training set %r has %d samples", spec.text, len(samples))
        for student in config.students:
            profile = ctx.profiles[student]
            tuning = make_training_config(profile, config.finetune)
            out = _checkpoint_dir(ctx, student, spec)
            refs = run_finetune(
                tuning,
                _enveloped(samples, profile),
                ctx.trainer,
                out,
                run_id=ctx.artifacts.run_id,
                training_set=spec.label,
            )
            write_json(
                out / CHECKPOINTS_FILE,
                {
                    "student": student,
                    "training_set": spec.text,
                    "label": spec.label,
                    "config": tuning.model_dump(mode="json"),
                    "samples": [s.record_id for s in samples],
                    "checkpoints": [
                        replace(r, path=ctx.artifacts.relative(Path(r.path))).to_dict() for r in refs
                    ],
                },
            )


# --- inference --------------------------------------------------------------


@dataclass(frozen=True)
class EvalTarget:
    """One model configuration evaluated on some datasets and splits."""

    student: str
    key: str
    model_id: str
    mode: str
    kinds: tuple[str, ...]
    splits: tuple[str, ...]
    training_set: str = ""
    epoch: int | None = None


def eval_targets(ctx: StageContext) -> list[EvalTarget]:
    """Baselines on the base model plus every checkpoint of every training set."""
    targets = []
    kinds = tuple(ctx.config.dataset_kinds)
    for student in ctx.config.students:
        base = ctx.profiles[student].model_id
        for key in BASELINE_TARGETS:
            mode = "finetune" if key == "epoch-0" else key
            epoch = 0 if key == "epoch-0" else None
            targets.append(EvalTarget(student, key, base, mode, kinds, ("test",), epoch=epoch))
    for cs in load_checkpoint_sets(ctx):
        for ref in cs.refs:
            targets.append(
                EvalTarget(
                    cs.student,
                    f"{cs.spec.label}/epoch-{ref.epoch}",
                    ref.model_id,
                    "finetune",
                    tuple(ctx.eval_kinds(cs.spec)),
                    ("test", "dev"),
                    training_set=cs.spec.label,
                    epoch=ref.epoch,
                )
            )
    return targets


def _student_prompt(record: QARecord, mode: str) -> PromptText:
    if mode == "finetune":
        return build_finetune_prompt(record)
    if mode == "few_shot":
        return build_baseline_prompt(record, "few_shot", load_exemplars(record.dataset_kind))
    return build_baseline_prompt(record, "zero_shot")


def _result_file(root: Path, target: EvalTarget, kind: str, split: str) -> Path:
    return root / target.student / target.key / f"{kind}-{split}.jsonl"


async def infer(ctx: StageContext) -> None:
    ctx.load_mock_answers()
    client = ctx.backends.client
    for target in eval_targets(ctx):
        profile = ctx.profiles[target.student]
        model_id = ctx.backends.model(profile.id, target.model_id)
        for kind in target.kinds:
            for split in target.splits:
                records = ctx.records(kind, split)
                if not records:
                    continue
                requests = [
                    CompletionRequest(
                        model_id=model_id,
                        prompt=apply_chat_envelope(_student_prompt(r, target.mode), profile.envelope),
                    )
                    for r in records
                ]
                results = await client.complete_many(requests)
                write_jsonl(
                    _result_file(ctx.artifacts.inference, target, kind, split),
                    (
                        {"record_id": r.id, "model_id": model_id, "completion": res.text}
                        for r, res in zip(records, results, strict=True)
                    ),
                )
        logger.info("Inference done for %s %s", target.student, target.key)


# --- grading ----------------------------------------------------------------


async def _execute_outputs(pool: SandboxPool, outputs: dict[str, str]) -> dict[str, ExecutionResult]:
    programs: dict[str, str] = {}
    results: dict[str, ExecutionResult] = {}
    for record_id, text in outputs.items():
        try:
            programs[record_id] = extract_program(text)
        except ExtractionError as e:
            results[record_id] = ExecutionResult(status="runtime_error", diagnostics=str(e))
    results.update(await pool.run_many(programs))
    return results


def _summary_row(target: EvalTarget, kind: str, split: str, rows: list[dict[str, Any]]) -> dict[str, Any]:
    return {
        "student": target.student,
        "target": target.key,
        "training_set": target.training_set,
        "epoch": target.epoch,
        "dataset": kind,
        "split": split,
        "samples": len(rows),
        "accuracy": accuracy([row["match"] for row in rows]),
        "executable_rate": accuracy([row["status"] == "ok" for row in rows]),
    }


async def grade_stage(ctx: StageContext) -> None:
    config = ctx.config
    summary: list[dict[str, Any]] = []
    dev_rows: dict[tuple[str, str, int], list[bool]] = {}
    for target in eval_targets(ctx):
        for kind in target.kinds:
            for split in target.splits:
                records = ctx.records(kind, split)
                if not records:
                    continue
                path = ctx.artifacts.require(_result_file(ctx.artifacts.inference, target, kind, split), "infer")
                outputs = {row["record_id"]: row["completion"] for row in read_jsonl(path)}
                gold = {r.id: r.gold_answer for r in records}
                results = await _execute_outputs(ctx.pool, outputs)
                rows = []
                for record_id in sorted(outputs):
                    result = results[record_id]
                    verdict = grade(result.answer if result.ok else None, gold[record_id], config.match)
                    rows.append(
                        {
                            "record_id": record_id,
                            **result.to_dict(),
                            "match": verdict.match,
                            "scale": verdict.scale,
                        }
                    )
                write_jsonl(_result_file(ctx.artifacts.grading, target, kind, split), rows)
                summary.append(_summary_row(target, kind, split, rows))
                if split == "dev" and target.epoch:
                    key = (target.student, target.training_set, target.epoch)
                    dev_rows.setdefault(key, []).extend(row["match"] for row in rows)

    selected: dict[str, str] = {}
    for cs in load_checkpoint_sets(ctx):
        scored = []
        for ref in cs.refs:
            matches = dev_rows.get((cs.student, cs.spec.label, ref.epoch))
            if not matches:
                raise CheckpointSelectionError(
                    f"No dev results for {cs.student} on {cs.spec.text!r} epoch {ref.epoch}"
                )
            scored.append(ref.with_dev_accuracy(accuracy(matches)))
        best = select_best_checkpoint(scored)
        target = f"{cs.spec.label}/epoch-{best.epoch}"
        selected[f"{cs.student}@{cs.spec.label}"] = target
        write_json(
            ctx.artifacts.grading / cs.student / cs.spec.label / SELECTION_FILE,
            {"checkpoints": [r.to_dict() for r in scored], "selected": best.to_dict()},
        )
        logger.info("Selected %s for %s (dev %.2f)", target, cs.student, best.dev_accuracy)

    write_json(ctx.artifacts.grading / SUMMARY_FILE, {"rows": summary, "selected": selected})
    for row in summary:
        if row["split"] == "test":
            logger.info(
                "%s %s %s: %.2f%%", row["student"], row["target"], row["dataset"], row["accuracy"]
            )


# --- probes -----------------------------------------------------------------


def _has_concept_line(program: str) -> bool:
    try:
        first_concept_line(program)
    except StructureError:
        return False
    return True


def _probe_targets(ctx: StageContext) -> Iterator[EvalTarget]:
    """Base model (epoch 0) and the first epoch of each training set."""
    seen: set[tuple[str, str]] = set()
    for target in eval_targets(ctx):
        if target.epoch not in (0, 1):
            continue
        if (target.student, target.key) in seen:
            continue
        seen.add((target.student, target.key))
        yield target


async def probe(ctx: StageContext) -> None:
    ctx.load_mock_answers()
    config = ctx.config
    judge = ctx.backends.model(config.judge)
    out_rows: list[dict[str, Any]] = []
    histograms: dict[str, Any] = {}
    for target in _probe_targets(ctx):
        profile = ctx.profiles[target.student]
        student_model = ctx.backends.model(profile.id, target.model_id)
        for kind in target.kinds:
            curated = {s.record_id: s for s in ctx.curated(kind, "test")}
            if not curated:
                logger.info("No curated %s test samples; skipping probes for %s", kind, target.key)
                continue
            records = {r.id: r for r in ctx.records(kind, "test")}
            outputs = {
                row["record_id"]: row["completion"]
                for row in read_jsonl(
                    ctx.artifacts.require(_result_file(ctx.artifacts.inference, target, kind, "test"), "infer")
                )
            }
            graded = {
                row["record_id"]: row
                for row in read_jsonl(
                    ctx.artifacts.require(_result_file(ctx.artifacts.grading, target, kind, "test"), "grade")
                )
            }
            ids = sorted(i for i in curated if i in outputs)
            if not ids:
                continue
            check_probe_inputs(ids, curated)

            concept = await run_concept_probe(
                ctx.backends.client,
                judge,
                [
                    ConceptProbeItem(i, judge_question(records[i]), curated[i].teacher_program, outputs[i])
                    for i in ids
                ],
            )
            entity_items = [
                EntityProbeItem(records[i], curated[i].teacher_program)
                for i in ids
                if _has_concept_line(curated[i].teacher_program)
            ]
            entity = None
            if entity_items:
                entity = await run_entity_probe(
                    ctx.backends.client, student_model, judge, entity_items, profile.envelope
                )

            out = ctx.artifacts.probes / target.student / target.key / kind
            write_jsonl(out / "concept.jsonl", (v.to_dict() for v in concept.verdicts))
            failures = list(concept.failures)
            if entity is not None:
                write_jsonl(out / "entity.jsonl", (v.to_dict() for v in entity.verdicts))
                write_jsonl(
                    out / "entity_outputs.jsonl",
                    ({"record_id": i, "completion": t} for i, t in sorted(entity.student_outputs.items())),
                )
                failures += entity.failures
            write_jsonl(out / "failures.jsonl", (f.to_dict() for f in failures))

            metrics = TargetMetrics(
                model=target.student,
                target=target.key.rsplit("/", 1)[-1],
                split="probe",
                dataset=kind,
                samples=len(ids),
                answer_accuracy=accuracy([bool(graded[i]["match"]) for i in ids]),
                executable_rate=executable_rate([ExecutionResult.from_dict(graded[i]) for i in ids]),
                concept_accuracy=concept_accuracy(concept.verdicts) if concept.verdicts else None,
                entity_accuracy=entity_accuracy(entity.verdicts) if entity and entity.verdicts else None,
                probe_samples=len(entity_items),
                excluded=len(records) - len(ids),
                training_set=target.training_set,
            )
            out_rows.append(metrics.to_dict())
            if concept.verdicts:
                histograms[f"{target.student}/{target.key}/{kind}"] = rating_distribution(
                    concept.verdicts
                ).to_dict()

    write_json(ctx.artifacts.probes / SUMMARY_FILE, {"rows": out_rows, "histograms": histograms})


STAGE_FUNCTIONS = {
    "ingest": ingest,
    "generate": generate,
    "curate": curate,
    "tune": tune,
    "infer": infer,
    "grade": grade_stage,
    "probe": probe,
}
