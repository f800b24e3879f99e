"""Execution-based filtering of teacher programs."""

import logging
from collections.abc import Awaitable, Callable, Mapping, Sequence
from pathlib import Path

from ..corpus import QARecord
from ..grading import MatchConfig, compare_answers
from ..prompts import CuratedSample, build_finetune_pair
from ..sandbox import ExtractionError, SandboxPool, extract_program
from ..storage import iter_jsonl, write_json, write_jsonl
from .errors import CurationInputError
from .types import REJECTION_REASONS, CurationReport, Rejection

logger = logging.getLogger(__name__)

Regenerate = Callable[[list[QARecord], int], Awaitable[dict[str, str]]]


async def curate(
    records: Sequence[QARecord],
    teacher_outputs: Mapping[str, str],
    cfg: MatchConfig | None = None,
    pool: SandboxPool | None = None,
) -> tuple[list[CuratedSample], CurationReport]:
    """Keep records whose teacher program executes to the gold answer.

    Args:
        records: Records to curate
        teacher_outputs: Raw teacher completion per record id
        cfg: Answer match configuration
        pool: Sandbox pool for execution

    Returns:
        Curated samples sorted by record id, and a report partitioning all
        records

    Raises:
        CurationInputError: If a record has no teacher output
    """
    cfg = cfg or MatchConfig()
    pool = pool or SandboxPool()
    by_id: dict[str, QARecord] = {}
    for record in records:
        if record.id not in teacher_outputs:
            raise CurationInputError(record.id)
        if record.id in by_id:
            raise CurationInputError(record.id, "appears more than once")
        by_id[record.id] = record

    rejections: list[Rejection] = []
    programs: dict[str, str] = {}
    for record_id, record in by_id.items():
        try:
            programs[record_id] = extract_program(teacher_outputs[record_id])
        except ExtractionError as e:
            rejections.append(Rejection(record_id, "extraction_failure", str(e)))

    results = await pool.run_many(programs)
    samples: list[CuratedSample] = []
    for record_id, result in results.items():
        record = by_id[record_id]
        program = programs[record_id]
        if not result.ok:
            rejections.append(Rejection(record_id, result.status, result.diagnostics, program))
        elif not compare_answers(result.answer, record.gold_answer, cfg):
            rejections.append(
                Rejection(
                    record_id,
                    "wrong_answer",
                    f"executed {result.answer!r}, gold {record.gold_answer!r}",
                    program,
                    result.answer,
                )
            )
        else:
            samples.append(build_finetune_pair(record, program, result.answer))

    samples.sort(key=lambda s: s.record_id)
    rejections.sort(key=lambda r: r.record_id)
    counts = {reason: 0 for reason in REJECTION_REASONS}
    for rejection in rejections:
        counts[rejection.reason] += 1
    report = CurationReport(
        total=len(by_id),
        kept=len(samples),
        rejected={k: v for k, v in counts.items() if v},
        rejections=tuple(rejections),
    )
    logger.info("Curated %d of %d records, rejected %s", report.kept, report.total, report.rejected)
    return samples, report


async def curate_with_retries(
    records: Sequence[QARecord],
    teacher_outputs: Mapping[str, str],
    regenerate: Regenerate,
    retry_budget: int = 0,
    cfg: MatchConfig | None = None,
    pool: SandboxPool | None = None,
) -> tuple[list[CuratedSample], CurationReport, dict[str, str]]:
    """Curate, re-querying the teacher for rejected records up to a budget.

    Args:
        regenerate: Async callback returning new raw outputs for the given
            records at the given attempt number (1-based retries)
        retry_budget: Extra teacher attempts per rejected record

    Returns:
        Samples, the final report with per-record attempt counts, and the
        teacher outputs actually used
    """
    outputs = dict(teacher_outputs)
    attempts = {r.id: 1 for r in records}
    samples, report = await curate(records, outputs, cfg, pool)
    kept = {s.record_id: s for s in samples}
    by_id = {r.id: r for r in records}
    final_rejections = {r.record_id: r for r in report.rejections}

    for attempt in range(1, retry_budget + 1):
        retry = [by_id[i] for i in sorted(final_rejections)]
        if not retry:
            break
        logger.info("Teacher retry %d/%d for %d records", attempt, retry_budget, len(retry))
        fresh = await regenerate(retry, attempt)
        outputs.update(fresh)
        for record in retry:
            attempts[record.id] += 1
        more, sub_report = await curate(retry, {r.id: outputs[r.id] for r in retry}, cfg, pool)
        for sample in more:
            kept[sample.record_id] = sample
            final_rejections.pop(sample.record_id, None)
        for rejection in sub_report.rejections:
            final_rejections[rejection.record_id] = rejection

    rejections = tuple(final_rejections[i] for i in sorted(final_rejections))
    counts: dict[str, int] = {}
    for rejection in rejections:
        counts[rejection.reason] = counts.get(rejection.reason, 0) + 1
    final = CurationReport(
        total=len(by_id),
        kept=len(kept),
        rejected=counts,
        rejections=rejections,
        attempts=attempts if retry_budget else {},
    )
    return [kept[i] for i in sorted(kept)], final, outputs


async def audit(
    samples: Sequence[CuratedSample],
    records: Sequence[QARecord],
    cfg: MatchConfig | None = None,
    pool: SandboxPool | None = None,
) -> list[str]:
    """Re-execute curated programs and return the ids that no longer validate."""
    cfg = cfg or MatchConfig()
    pool = pool or SandboxPool()
    gold = {r.id: r.gold_answer for r in records}
    results = await pool.run_many({s.record_id: s.teacher_program for s in samples})
    failing = []
    for sample in samples:
        result = results[sample.record_id]
        if (
            sample.record_id not in gold
            or not result.ok
            or result.answer != sample.executed_answer
            or not compare_answers(result.answer, gold[sample.record_id], cfg)
        ):
            failing.append(sample.record_id)
    return sorted(failing)


def write_curated(samples: Sequence[CuratedSample], path: Path) -> int:
    """Write curated pairs one JSON object per line."""
    return write_jsonl(path, (s.to_dict() for s in samples))


def read_curated(path: Path) -> list[CuratedSample]:
    """Read curated pairs written by write_curated."""
    return [CuratedSample.from_dict(row) for row in iter_jsonl(path)]


def write_report(report: CurationReport, directory: Path) -> None:
    """Write the summary and the per-record rejections."""
    write_json(directory / "report.json", report.to_dict())
    write_jsonl(directory / "rejected.jsonl", (r.to_dict() for r in report.rejections))
