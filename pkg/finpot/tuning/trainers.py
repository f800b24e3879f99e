"""Trainer backends for adapter fine-tuning."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..prompts import CuratedSample
from ..storage import sha256_text, write_json
from .config import FinetuneConfig
from .errors import TrainingError

logger = logging.getLogger(__name__)

IGNORE_INDEX = -100


def sample_hash(sample: CuratedSample) -> str:
    """Content hash of one prompt-completion pair."""
    return sha256_text(sample.prompt + "\x00" + sample.completion)


@dataclass(frozen=True)
class EpochCheckpoint:
    """A checkpoint directory written by a backend at the end of an epoch."""

    epoch: int
    path: Path


class TrainerBackend:
    """Base class for trainer backends."""

    @property
    def name(self) -> str:
        """Backend name."""
        raise NotImplementedError

    def train(
        self, config: FinetuneConfig, samples: list[CuratedSample], output_dir: Path
    ) -> list[EpochCheckpoint]:
        """Train one adapter and write one checkpoint per epoch.

        Args:
            config: Hyperparameters
            samples: Prompt-completion pairs, in training order
            output_dir: Directory receiving ``epoch-<k>`` checkpoints

        Returns:
            Checkpoints in epoch order

        Raises:
            TrainingError: If training fails
        """
        raise NotImplementedError


@dataclass(frozen=True)
class TrainingRecord:
    """What the recording trainer received for one run."""

    config: dict[str, Any]
    sample_count: int
    sample_hashes: tuple[str, ...]


class RecordingTrainer(TrainerBackend):
    """Trainer that records its inputs and writes placeholder checkpoints."""

    def __init__(self) -> None:
        self.runs: list[TrainingRecord] = []

    @property
    def name(self) -> str:
        return "recording"

    def train(
        self, config: FinetuneConfig, samples: list[CuratedSample], output_dir: Path
    ) -> list[EpochCheckpoint]:
        record = TrainingRecord(
            config=config.model_dump(mode="json"),
            sample_count=len(samples),
            sample_hashes=tuple(sample_hash(s) for s in samples),
        )
        self.runs.append(record)
        checkpoints = []
        for epoch in range(1, config.epochs + 1):
            path = output_dir / f"epoch-{epoch}"
            write_json(
                path / "adapter.json",
                {
                    "backend": self.name,
                    "epoch": epoch,
                    "config": record.config,
                    "sample_count": record.sample_count,
                    "samples_sha256": sha256_text("".join(record.sample_hashes)),
                },
            )
            checkpoints.append(EpochCheckpoint(epoch=epoch, path=path))
        return checkpoints


class PeftTrainer(TrainerBackend):
    """LoRA adapter training with peft and the transformers Trainer.

    Needs the ``train`` extra. Prompt tokens are masked from the loss, so only
    the completion is learned. An adapter is saved at the end of every epoch.
    """

    def __init__(self, max_length: int = 4096) -> None:
        self.max_length = max_length

    @property
    def name(self) -> str:
        return "peft"

    def train(
        self, config: FinetuneConfig, samples: list[CuratedSample], output_dir: Path
    ) -> list[EpochCheckpoint]:
        try:
            import torch
            from peft import LoraConfig, get_peft_model
            from transformers import (
                AutoModelForCausalLM,
                AutoTokenizer,
                DataCollatorForSeq2Seq,
                Trainer,
                TrainerCallback,
                TrainingArguments,
            )
        except ImportError as e:
            raise TrainingError(
                "The peft trainer needs the 'train' extra (torch, transformers, peft)",
                diagnostics=str(e),
            ) from e

        checkpoints: list[EpochCheckpoint] = []

        class SaveAdapterPerEpoch(TrainerCallback):
            def on_epoch_end(self, args, state, control, model=None, **kwargs):  # noqa: ANN001
                epoch = round(state.epoch or 0)
                path = output_dir / f"epoch-{epoch}"
                model.save_pretrained(str(path))
                tokenizer.save_pretrained(str(path))
                checkpoints.append(EpochCheckpoint(epoch=epoch, path=path))
                logger.info("Saved adapter for epoch %d to %s", epoch, path)

        try:
            tokenizer = AutoTokenizer.from_pretrained(config.base_model, use_fast=True)
            if tokenizer.pad_token_id is None:
                tokenizer.pad_token = tokenizer.eos_token
            model = AutoModelForCausalLM.from_pretrained(
                config.base_model,
                torch_dtype=torch.bfloat16 if config.bf16 else None,
            )
            model = get_peft_model(
                model,
                LoraConfig(
                    r=config.lora_r,
                    lora_alpha=config.lora_alpha,
                    lora_dropout=config.lora_dropout,
                    target_modules=config.target_modules,
                    bias=config.lora_bias,
                    task_type=config.task_type,
                ),
            )
            dataset = [self._encode(tokenizer, s) for s in samples]
            args = TrainingArguments(
                output_dir=str(output_dir / "trainer"),
                num_train_epochs=config.epochs,
                per_device_train_batch_size=config.batch_size,
                gradient_accumulation_steps=config.grad_accum_steps,
                learning_rate=config.learning_rate,
                bf16=config.bf16,
                save_strategy="no",
                logging_steps=50,
                seed=config.seed,
                report_to=[],
                remove_unused_columns=False,
            )
            trainer = Trainer(
                model=model,
                args=args,
                train_dataset=dataset,
                data_collator=DataCollatorForSeq2Seq(
                    tokenizer, padding=True, label_pad_token_id=IGNORE_INDEX
                ),
                callbacks=[SaveAdapterPerEpoch()],
            )
            trainer.train()
        except TrainingError:
            raise
        except Exception as e:
            raise TrainingError(f"Adapter training failed: {e}", diagnostics=repr(e)) from e
        return sorted(checkpoints, key=lambda c: c.epoch)

    def _encode(self, tokenizer: Any, sample: CuratedSample) -> dict[str, list[int]]:
        prompt_ids = tokenizer(sample.prompt, add_special_tokens=True)["input_ids"]
        completion_ids = tokenizer(sample.completion, add_special_tokens=False)["input_ids"]
        completion_ids = completion_ids + [tokenizer.eos_token_id]
        input_ids = (prompt_ids + completion_ids)[: self.max_length]
        labels = ([IGNORE_INDEX] * len(prompt_ids) + completion_ids)[: self.max_length]
        return {
            "input_ids": input_ids,
            "attention_mask": [1] * len(input_ids),
            "labels": labels,
        }


def create_trainer(name: str) -> TrainerBackend:
    """Create a trainer backend by name ("recording" or "peft")."""
    match name:
        case "recording":
            return RecordingTrainer()
        case "peft":
            return PeftTrainer()
    raise TrainingError(f"Unknown trainer backend {name!r}")
