"""Checkpoint references and dev-based selection."""

from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Any

from .errors import CheckpointSelectionError


def checkpoint_model_id(student: str, training_set: str, epoch: int) -> str:
    """Model id under which a checkpoint is served for inference."""
    return f"{student}@{training_set}/epoch-{epoch}"


@dataclass(frozen=True)
class CheckpointRef:
    """A trained adapter checkpoint."""

    run_id: str
    epoch: int
    path: str
    model_id: str = ""
    dev_accuracy: float | None = None

    def with_dev_accuracy(self, value: float) -> "CheckpointRef":
        return replace(self, dev_accuracy=value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "epoch": self.epoch,
            "path": self.path,
            "model_id": self.model_id,
            "dev_accuracy": self.dev_accuracy,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CheckpointRef":
        return cls(
            run_id=data["run_id"],
            epoch=int(data["epoch"]),
            path=data["path"],
            model_id=data.get("model_id", ""),
            dev_accuracy=data.get("dev_accuracy"),
        )


def select_best_checkpoint(checkpoints: Sequence[CheckpointRef]) -> CheckpointRef:
    """Pick the checkpoint with the highest dev accuracy, earliest epoch on ties.

    Raises:
        CheckpointSelectionError: If the list is empty or an accuracy is missing
    """
    if not checkpoints:
        raise CheckpointSelectionError("No checkpoints to select from")
    missing = [c.epoch for c in checkpoints if c.dev_accuracy is None]
    if missing:
        raise CheckpointSelectionError(f"Checkpoints without dev accuracy: epochs {missing}")
    return min(checkpoints, key=lambda c: (-c.dev_accuracy, c.epoch))  # type: ignore[operator]
