"""Adapter training orchestration."""

import logging
import time
from collections.abc import Sequence
from pathlib import Path

from ..prompts import CuratedSample
from .checkpoints import CheckpointRef, checkpoint_model_id
from .config import FinetuneConfig
from .errors import TrainingError, TrainingInputError
from .trainers import TrainerBackend

logger = logging.getLogger(__name__)


def run_finetune(
    config: FinetuneConfig,
    samples: Sequence[CuratedSample],
    backend: TrainerBackend,
    output_dir: str | Path,
    run_id: str,
    training_set: str = "default",
) -> list[CheckpointRef]:
    """Train an adapter on curated samples and return one reference per epoch.

    Args:
        config: Hyperparameters
        samples: Curated prompt-completion pairs
        backend: Trainer backend
        output_dir: Directory for this run's checkpoints
        run_id: Run identifier stored in each reference
        training_set: Training-set label used in checkpoint model ids

    Returns:
        Checkpoint references in epoch order

    Raises:
        TrainingInputError: If there are no samples or no epochs
        TrainingError: If the backend fails or does not emit exactly one
            checkpoint per configured epoch
    """
    if not samples:
        raise TrainingInputError("Cannot fine-tune on an empty sample list")
    if config.epochs <= 0:
        raise TrainingInputError(f"epochs must be positive, got {config.epochs}")

    logger.info(
        "Training %s on %d samples for %d epochs (%s backend)",
        config.model_profile,
        len(samples),
        config.epochs,
        backend.name,
    )
    started = time.monotonic()
    emitted = backend.train(config, list(samples), Path(output_dir))

    epochs = [c.epoch for c in emitted]
    if epochs != list(range(1, config.epochs + 1)):
        raise TrainingError(
            f"{backend.name} backend emitted unexpected epochs {epochs}",
            diagnostics=f"configured epochs: {config.epochs}",
        )

    refs = [
        CheckpointRef(
            run_id=run_id,
            epoch=c.epoch,
            path=str(c.path),
            model_id=checkpoint_model_id(config.model_profile, training_set, c.epoch),
        )
        for c in emitted
    ]
    logger.info("Training finished with %d checkpoints in %.1fs", len(refs), time.monotonic() - started)
    return refs
