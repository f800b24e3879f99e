"""Type definitions for curation."""

from dataclasses import dataclass, field
from typing import Any, Literal

RejectionReason = Literal[
    "wrong_answer",
    "runtime_error",
    "timeout",
    "missing_answer",
    "extraction_failure",
]

REJECTION_REASONS: tuple[RejectionReason, ...] = (
    "wrong_answer",
    "runtime_error",
    "timeout",
    "missing_answer",
    "extraction_failure",
)


@dataclass(frozen=True)
class Rejection:
    """A teacher output that did not survive curation."""

    record_id: str
    reason: RejectionReason
    diagnostics: str = ""
    program: str | None = None
    executed_answer: Any = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "record_id": self.record_id,
            "reason": self.reason,
            "diagnostics": self.diagnostics,
            "program": self.program,
            "executed_answer": self.executed_answer,
        }


@dataclass(frozen=True)
class CurationReport:
    """Counts partitioning every curated record into kept or a rejection reason."""

    total: int
    kept: int
    rejected: dict[str, int] = field(default_factory=dict)
    rejections: tuple[Rejection, ...] = ()
    attempts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kept + sum(self.rejected.values()) != self.total:
            raise ValueError("curation report counts do not partition the input")

    def to_dict(self) -> dict[str, Any]:
        """Summary form written to the run directory."""
        return {
            "total": self.total,
            "kept": self.kept,
            "rejected": dict(self.rejected),
            "attempts": dict(self.attempts),
        }
