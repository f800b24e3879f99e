"""Training-set specs such as ``FinQA:1000 + ConvFinQA:500``."""

import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from ..corpus import DatasetKind, sample_subset
from ..prompts import CuratedSample
from .errors import RunConfigError

_KIND_NAMES: dict[str, DatasetKind] = {
    "finqa": "finqa",
    "convfinqa": "convfinqa",
    "tatqa": "tatqa",
    "tat-qa": "tatqa",
}

_PART = re.compile(r"^\s*([A-Za-z-]+)\s*(?::\s*(\d+))?\s*$")


@dataclass(frozen=True)
class TrainingSetPart:
    kind: DatasetKind
    count: int | None = None


@dataclass(frozen=True)
class TrainingSetSpec:
    """A training set drawn from curated train samples by dataset tag.

    A part without a count takes the full curated set of its dataset.
    """

    text: str
    parts: tuple[TrainingSetPart, ...]

    @property
    def label(self) -> str:
        """Path-safe name, e.g. ``finqa-1000+convfinqa-500`` or ``finqa``."""
        return "+".join(p.kind if p.count is None else f"{p.kind}-{p.count}" for p in self.parts)

    @property
    def kinds(self) -> list[DatasetKind]:
        return [p.kind for p in self.parts]


def parse_training_set(text: str) -> TrainingSetSpec:
    """Parse a ``+``-joined list of ``Dataset[:count]`` parts.

    Raises:
        RunConfigError: If a part is malformed, names an unknown dataset or
            repeats one
    """
    parts: list[TrainingSetPart] = []
    for chunk in text.split("+"):
        match = _PART.match(chunk)
        if match is None:
            raise RunConfigError(f"Malformed training-set part {chunk!r} in {text!r}")
        name = match.group(1).casefold()
        if name not in _KIND_NAMES:
            raise RunConfigError(f"Unknown dataset {match.group(1)!r} in {text!r}")
        count = int(match.group(2)) if match.group(2) else None
        if count == 0:
            raise RunConfigError(f"Training-set part {chunk.strip()!r} has a zero count")
        parts.append(TrainingSetPart(_KIND_NAMES[name], count))
    kinds = [p.kind for p in parts]
    if len(set(kinds)) != len(kinds):
        raise RunConfigError(f"Dataset repeats in training set {text!r}")
    return TrainingSetSpec(text=" + ".join(chunk.strip() for chunk in text.split("+")), parts=tuple(parts))


def default_training_sets(kinds: Sequence[DatasetKind]) -> list[TrainingSetSpec]:
    """One full training set per configured dataset."""
    return [TrainingSetSpec(text=kind, parts=(TrainingSetPart(kind),)) for kind in kinds]


def select_training_samples(
    spec: TrainingSetSpec,
    curated_train: Mapping[str, Sequence[CuratedSample]],
    seed: int,
) -> list[CuratedSample]:
    """Draw a spec's samples from the curated train samples of each dataset.

    Parts are concatenated in spec order; each sampled part keeps the input
    order of its chosen samples.

    Raises:
        SamplingError: If a part asks for more samples than were curated
    """
    selected: list[CuratedSample] = []
    for part in spec.parts:
        pool = list(curated_train.get(part.kind, ()))
        selected.extend(pool if part.count is None else sample_subset(pool, part.count, seed))
    return selected
