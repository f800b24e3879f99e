"""Type definitions for the probes module."""

from dataclasses import dataclass, field
from typing import Any, Literal

from ..corpus import QARecord

VerdictKind = Literal["concept", "entity"]

RATING_LEVELS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class JudgeVerdict:
    """A parsed judge response.

    Concept verdicts carry ``rating``; entity verdicts carry ``correct``.
    """

    kind: VerdictKind
    rating: int | None = None
    correct: bool | None = None
    explanation: str = ""
    raw_response: str = ""
    record_id: str = ""

    def __post_init__(self) -> None:
        if self.kind == "concept":
            if self.rating not in RATING_LEVELS or self.correct is not None:
                raise ValueError(f"Concept verdict needs a rating in 1-5, got {self.rating!r}")
        elif self.correct is None or self.rating is not None:
            raise ValueError("Entity verdict needs exactly a correct flag")

    def to_dict(self) -> dict[str, Any]:
        return {
            "record_id": self.record_id,
            "kind": self.kind,
            "rating": self.rating,
            "correct": self.correct,
            "explanation": self.explanation,
            "raw_response": self.raw_response,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "JudgeVerdict":
        return cls(
            kind=data["kind"],
            rating=data.get("rating"),
            correct=data.get("correct"),
            explanation=data.get("explanation", ""),
            raw_response=data.get("raw_response", ""),
            record_id=data.get("record_id", ""),
        )


@dataclass(frozen=True)
class ParseFailure:
    """A judge response that could not be parsed, kept for audit."""

    record_id: str
    kind: VerdictKind
    raw_response: str
    message: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "record_id": self.record_id,
            "kind": self.kind,
            "raw_response": self.raw_response,
            "message": self.message,
        }


@dataclass(frozen=True)
class RatingHistogram:
    """Percentage of verdicts per rating level, one decimal."""

    percents: tuple[float, float, float, float, float]
    counts: tuple[int, int, int, int, int]

    def __getitem__(self, level: int) -> float:
        if level not in RATING_LEVELS:
            raise KeyError(level)
        return self.percents[level - 1]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def to_dict(self) -> dict[str, Any]:
        return {
            "percents": {str(level): p for level, p in zip(RATING_LEVELS, self.percents, strict=True)},
            "counts": {str(level): c for level, c in zip(RATING_LEVELS, self.counts, strict=True)},
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RatingHistogram":
        return cls(
            percents=tuple(float(data["percents"][str(level)]) for level in RATING_LEVELS),  # type: ignore[arg-type]
            counts=tuple(int(data["counts"][str(level)]) for level in RATING_LEVELS),  # type: ignore[arg-type]
        )


@dataclass(frozen=True)
class ConceptProbeItem:
    """One student output to rate for its financial concept."""

    record_id: str
    question: str
    gold_program: str
    student_output: str


@dataclass(frozen=True)
class EntityProbeItem:
    """One curated record to probe for entity extraction."""

    record: QARecord
    teacher_program: str


@dataclass(frozen=True)
class ProbeOutcome:
    """Verdicts sorted by record id plus the responses that failed to parse."""

    verdicts: tuple[JudgeVerdict, ...]
    failures: tuple[ParseFailure, ...] = ()
    student_outputs: dict[str, str] = field(default_factory=dict)
