"""Dataset adapters mapping raw dataset files into QARecords.

Each adapter documents the raw fields it reads. The normalized QARecord is the
only schema the rest of the pipeline sees.
"""

import json
import logging
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from .errors import IngestError, SchemaError
from .table import normalize_table
from .types import DatasetKind, IngestStats, QARecord, SplitName

logger = logging.getLogger(__name__)


def _require(sample: Mapping[str, Any], dotted: str, index: int, path: Path | None) -> Any:
    value: Any = sample
    for part in dotted.split("."):
        if not isinstance(value, Mapping) or part not in value:
            raise SchemaError(dotted, index, path)
        value = value[part]
    return value


def _join_text(*chunks: Any) -> str:
    parts: list[str] = []
    for chunk in chunks:
        if isinstance(chunk, str):
            parts.append(chunk.strip())
        elif chunk:
            parts.extend(str(line).strip() for line in chunk)
    return " ".join(part for part in parts if part)


class DatasetAdapter:
    """Base interface for dataset adapters."""

    kind: DatasetKind

    def convert(
        self,
        samples: list[Any],
        split: SplitName = "unassigned",
        path: Path | None = None,
    ) -> tuple[list[QARecord], IngestStats]:
        """Convert raw samples into records.

        Args:
            samples: Parsed raw samples
            split: Split tag of the raw file
            path: Source file, used in error messages

        Returns:
            Records and ingestion counts

        Raises:
            SchemaError: If a sample lacks a required field
        """
        raise NotImplementedError


class FinQAAdapter(DatasetAdapter):
    """FinQA: ``pre_text``, ``post_text``, ``table``, ``qa.question``,
    ``qa.program``, ``qa.exe_ans`` and ``id``."""

    kind: DatasetKind = "finqa"

    def convert(
        self,
        samples: list[Any],
        split: SplitName = "unassigned",
        path: Path | None = None,
    ) -> tuple[list[QARecord], IngestStats]:
        records = []
        for index, sample in enumerate(samples):
            question = str(_require(sample, "qa.question", index, path)).strip()
            if not question:
                raise SchemaError("qa.question", index, path)
            records.append(
                QARecord(
                    id=str(sample.get("id") or f"finqa-{split}-{index}"),
                    dataset_kind=self.kind,
                    passage_text=_join_text(sample.get("pre_text"), sample.get("post_text")),
                    table=normalize_table(_require(sample, "table", index, path)),
                    question=question,
                    gold_program=sample["qa"].get("program") or None,
                    gold_answer=_require(sample, "qa.exe_ans", index, path),
                    split=split,
                )
            )
        return records, IngestStats(raw_samples=len(samples), records=len(records))


class ConvFinQAAdapter(DatasetAdapter):
    """ConvFinQA: ``pre_text``, ``post_text``, ``table``, ``id`` and
    ``annotation.{dialogue_break, turn_program, exe_ans_list}``.

    One record per conversation: the last turn is the question, the earlier
    turns are prior questions, and the last turn's program and answer are gold.
    """

    kind: DatasetKind = "convfinqa"

    def convert(
        self,
        samples: list[Any],
        split: SplitName = "unassigned",
        path: Path | None = None,
    ) -> tuple[list[QARecord], IngestStats]:
        records = []
        for index, sample in enumerate(samples):
            turns = [str(t).strip() for t in _require(sample, "annotation.dialogue_break", index, path)]
            if not turns or not turns[-1]:
                raise SchemaError("annotation.dialogue_break", index, path)
            programs = _require(sample, "annotation.turn_program", index, path)
            answers = _require(sample, "annotation.exe_ans_list", index, path)
            if not programs or not answers:
                raise SchemaError("annotation.exe_ans_list", index, path)
            records.append(
                QARecord(
                    id=str(sample.get("id") or f"convfinqa-{split}-{index}"),
                    dataset_kind=self.kind,
                    passage_text=_join_text(sample.get("pre_text"), sample.get("post_text")),
                    table=normalize_table(_require(sample, "table", index, path)),
                    question=turns[-1],
                    prior_questions=tuple(turns[:-1]),
                    gold_program=str(programs[-1]) or None,
                    gold_answer=answers[-1],
                    split=split,
                )
            )
        return records, IngestStats(raw_samples=len(samples), records=len(records))


class TatQAAdapter(DatasetAdapter):
    """TAT-QA: documents with ``table.table``, ``paragraphs[].text`` (sorted by
    ``order``) and ``questions[]`` carrying ``uid``, ``question``, ``answer``,
    ``derivation`` and ``answer_type``.

    Only questions tagged ``answer_type == "arithmetic"`` are kept; the
    dataset's own tag is the filter.
    """

    kind: DatasetKind = "tatqa"

    def convert(
        self,
        samples: list[Any],
        split: SplitName = "unassigned",
        path: Path | None = None,
    ) -> tuple[list[QARecord], IngestStats]:
        records = []
        raw = 0
        rejected = 0
        for index, doc in enumerate(samples):
            questions = _require(doc, "questions", index, path)
            table = normalize_table(_require(doc, "table.table", index, path))
            paragraphs = sorted(doc.get("paragraphs") or [], key=lambda p: p.get("order", 0))
            passage = _join_text([p.get("text", "") for p in paragraphs])
            for q_index, question in enumerate(questions):
                raw += 1
                if question.get("answer_type") != "arithmetic":
                    rejected += 1
                    continue
                text = str(_require(question, "question", index, path)).strip()
                if not text:
                    raise SchemaError("questions.question", index, path)
                records.append(
                    QARecord(
                        id=str(question.get("uid") or f"tatqa-{split}-{index}-{q_index}"),
                        dataset_kind=self.kind,
                        passage_text=passage,
                        table=table,
                        question=text,
                        gold_program=question.get("derivation") or None,
                        gold_answer=_require(question, "answer", index, path),
                        split=split,
                    )
                )
        stats = IngestStats(
            raw_samples=raw,
            records=len(records),
            rejected={"non_arithmetic": rejected} if rejected else {},
        )
        return records, stats


ADAPTERS: dict[str, DatasetAdapter] = {
    "finqa": FinQAAdapter(),
    "convfinqa": ConvFinQAAdapter(),
    "tatqa": TatQAAdapter(),
}


def get_adapter(kind: str) -> DatasetAdapter:
    """Look up the adapter for a dataset kind."""
    try:
        return ADAPTERS[kind]
    except KeyError:
        raise IngestError(kind, f"unknown dataset kind, expected one of {sorted(ADAPTERS)}") from None


def load_dataset(path: Path | str, kind: str, split: SplitName = "unassigned") -> list[QARecord]:
    """Load one raw dataset file into normalized records.

    Args:
        path: Raw JSON file (a list of samples)
        kind: Dataset kind
        split: Split tag given to every record of the file

    Returns:
        Normalized records in file order

    Raises:
        IngestError: If the file cannot be read or parsed
        SchemaError: If a sample lacks a required field
    """
    path = Path(path)
    adapter = get_adapter(kind)
    try:
        samples = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise IngestError(path, str(e)) from e
    except json.JSONDecodeError as e:
        raise IngestError(path, f"invalid JSON: {e}") from e
    if not isinstance(samples, list):
        raise IngestError(path, "expected a JSON list of samples")

    records, stats = adapter.convert(samples, split=split, path=path)
    logger.info(
        "Ingested %s %s from %s: %d raw, %d records%s",
        kind,
        split,
        path.name,
        stats.raw_samples,
        stats.records,
        f", rejected {stats.rejected}" if stats.rejected else "",
    )
    return records
