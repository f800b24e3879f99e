"""Type definitions for the corpus module."""

from dataclasses import dataclass, field
from typing import Any, Literal

from .errors import SchemaError, SplitConfigError

DatasetKind = Literal["finqa", "convfinqa", "tatqa"]
SplitName = Literal["train", "dev", "test", "unassigned"]
Answer = float | int | str

DATASET_KINDS: tuple[DatasetKind, ...] = ("finqa", "convfinqa", "tatqa")


@dataclass(frozen=True)
class QARecord:
    """One normalized question-answering sample."""

    id: str
    dataset_kind: DatasetKind
    passage_text: str
    table: tuple[tuple[str, ...], ...]
    question: str
    prior_questions: tuple[str, ...] = ()
    gold_program: str | None = None
    gold_answer: Answer = ""
    split: SplitName = "unassigned"

    def __post_init__(self) -> None:
        if not self.question.strip():
            raise SchemaError("question", record_id=self.id, reason="has an empty")

    def to_dict(self) -> dict[str, Any]:
        """Convert the record to its persisted dictionary form."""
        return {
            "id": self.id,
            "dataset_kind": self.dataset_kind,
            "passage_text": self.passage_text,
            "table": [list(row) for row in self.table],
            "question": self.question,
            "prior_questions": list(self.prior_questions),
            "gold_program": self.gold_program,
            "gold_answer": self.gold_answer,
            "split": self.split,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "QARecord":
        """Create a QARecord from its persisted dictionary form."""
        return cls(
            id=str(data["id"]),
            dataset_kind=data["dataset_kind"],
            passage_text=data.get("passage_text", ""),
            table=tuple(tuple(str(c) for c in row) for row in data.get("table", [])),
            question=data["question"],
            prior_questions=tuple(data.get("prior_questions") or ()),
            gold_program=data.get("gold_program"),
            gold_answer=data.get("gold_answer", ""),
            split=data.get("split", "unassigned"),
        )


@dataclass(frozen=True)
class SplitPlan:
    """How to carve train/dev/test out of the predefined dataset files.

    When ``uses_predefined_test`` is false the predefined dev file plays the
    test role, because the public test files of that dataset carry no answers.
    """

    dev_count: int = 0
    seed: int = 0
    uses_predefined_test: bool = True

    def __post_init__(self) -> None:
        if self.dev_count < 0:
            raise SplitConfigError(f"dev_count must be nonnegative, got {self.dev_count}")


@dataclass(frozen=True)
class IngestStats:
    """Counts reported by a dataset adapter."""

    raw_samples: int
    records: int
    rejected: dict[str, int] = field(default_factory=dict)
