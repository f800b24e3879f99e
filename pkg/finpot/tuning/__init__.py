"""Adapter fine-tuning configuration, training and checkpoint selection."""

from .checkpoints import CheckpointRef, checkpoint_model_id, select_best_checkpoint
from .config import LEARNING_RATES, FinetuneConfig, make_sweep_configs, make_training_config
from .errors import CheckpointSelectionError, TrainingError, TrainingInputError, TuningConfigError
from .finetune import run_finetune
from .trainers import (
    EpochCheckpoint,
    PeftTrainer,
    RecordingTrainer,
    TrainerBackend,
    TrainingRecord,
    create_trainer,
    sample_hash,
)

__all__ = [
    "LEARNING_RATES",
    "CheckpointRef",
    "CheckpointSelectionError",
    "EpochCheckpoint",
    "FinetuneConfig",
    "PeftTrainer",
    "RecordingTrainer",
    "TrainerBackend",
    "TrainingError",
    "TrainingInputError",
    "TrainingRecord",
    "TuningConfigError",
    "checkpoint_model_id",
    "create_trainer",
    "make_sweep_configs",
    "make_training_config",
    "run_finetune",
    "sample_hash",
    "select_best_checkpoint",
]
