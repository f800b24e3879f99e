"""Type definitions for the sandbox module."""

from dataclasses import dataclass
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import SandboxLimitError

ExecutionStatus = Literal["ok", "runtime_error", "timeout", "missing_answer"]

MIB = 1024 * 1024


class SandboxLimits(BaseModel):
    """Per-execution limits and pool size."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    timeout: float = Field(default=10.0, gt=0)
    memory: int = Field(default=512 * MIB, gt=0)
    max_workers: int = Field(default=4, gt=0)
    max_file_size: int = Field(default=MIB, gt=0)


@dataclass(frozen=True)
class ExecutionResult:
    """Outcome of running one program."""

    status: ExecutionStatus
    answer: Any = None
    diagnostics: str = ""
    duration: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        """Convert to the persisted dictionary form.

        Durations are left out unless ``timing`` is set, so persisted results
        are reproducible.
        """
        data: dict[str, Any] = {
            "status": self.status,
            "answer": self.answer,
            "diagnostics": self.diagnostics,
        }
        if timing:
            data["duration"] = round(self.duration, 4)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExecutionResult":
        """Create an ExecutionResult from its persisted dictionary form."""
        return cls(
            status=data["status"],
            answer=data.get("answer"),
            diagnostics=data.get("diagnostics", ""),
            duration=data.get("duration", 0.0),
        )


def build_limits(values: dict[str, Any] | None = None) -> SandboxLimits:
    """Validate sandbox limits from configuration values.

    Raises:
        SandboxLimitError: If a limit is missing a positive value or unknown
    """
    try:
        return SandboxLimits.model_validate(values or {})
    except ValidationError as e:
        raise SandboxLimitError(str(e)) from e
