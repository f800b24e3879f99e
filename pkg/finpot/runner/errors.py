"""Error classes for the experiment runner."""

from pathlib import Path

from ..errors import FinpotError


class RunConfigError(FinpotError):
    """A run configuration is invalid or references unknown profiles."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="RUN_CONFIG_ERROR")


class StageError(FinpotError):
    """A pipeline stage failed; its partial artifacts are kept."""

    def __init__(self, stage: str, message: str, record_id: str | None = None) -> None:
        super().__init__(message, code="STAGE_ERROR", stage=stage, record_id=record_id)

    def __str__(self) -> str:
        return f"Stage {self.stage!r} failed: {self.args[0]}"

    def located(self) -> str:
        return f"{self} (record {self.record_id})" if self.record_id else str(self)


class MissingArtifactError(FinpotError):
    """A stage input produced by an earlier stage is missing."""

    def __init__(self, path: Path, producer: str) -> None:
        super().__init__(f"Missing {path} (run the {producer!r} stage first)", code="MISSING_ARTIFACT")
        self.path = path
        self.producer = producer
