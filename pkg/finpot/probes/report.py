"""Per-target evaluation metrics and the run-level report."""

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from ..storage import dumps, sha256_text
from .errors import ProbeInputError
from .types import RatingHistogram


@dataclass(frozen=True)
class TargetMetrics:
    """Metrics of one evaluated model target on one split."""

    model: str
    target: str
    split: str
    dataset: str
    samples: int
    answer_accuracy: float
    executable_rate: float
    concept_accuracy: float | None = None
    entity_accuracy: float | None = None
    probe_samples: int = 0
    excluded: int = 0
    training_set: str = ""

    def percentages(self) -> dict[str, float | None]:
        return {
            "answer_accuracy": self.answer_accuracy,
            "executable_rate": self.executable_rate,
            "concept_accuracy": self.concept_accuracy,
            "entity_accuracy": self.entity_accuracy,
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "target": self.target,
            "split": self.split,
            "dataset": self.dataset,
            "training_set": self.training_set,
            "samples": self.samples,
            "probe_samples": self.probe_samples,
            "excluded": self.excluded,
            **self.percentages(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "TargetMetrics":
        return cls(
            model=data["model"],
            target=data["target"],
            split=data["split"],
            dataset=data["dataset"],
            samples=int(data["samples"]),
            answer_accuracy=data["answer_accuracy"],
            executable_rate=data["executable_rate"],
            concept_accuracy=data.get("concept_accuracy"),
            entity_accuracy=data.get("entity_accuracy"),
            probe_samples=int(data.get("probe_samples", 0)),
            excluded=int(data.get("excluded", 0)),
            training_set=data.get("training_set", ""),
        )


@dataclass(frozen=True)
class EvalReport:
    """All target metrics of a run with the fingerprint of its configuration."""

    rows: tuple[TargetMetrics, ...]
    histograms: dict[str, RatingHistogram] = field(default_factory=dict)
    selected: dict[str, str] = field(default_factory=dict)
    fingerprint: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "fingerprint": self.fingerprint,
            "rows": [r.to_dict() for r in self.rows],
            "histograms": {k: h.to_dict() for k, h in sorted(self.histograms.items())},
            "selected": dict(sorted(self.selected.items())),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EvalReport":
        return cls(
            rows=tuple(TargetMetrics.from_dict(r) for r in data.get("rows", [])),
            histograms={
                k: RatingHistogram.from_dict(h) for k, h in data.get("histograms", {}).items()
            },
            selected=dict(data.get("selected", {})),
            fingerprint=data.get("fingerprint", ""),
        )


def config_fingerprint(config: Any) -> str:
    """Stable hash of a JSON-serializable configuration snapshot."""
    return sha256_text(dumps(config))


def build_eval_report(
    rows: Sequence[TargetMetrics],
    config: Any,
    histograms: Mapping[str, RatingHistogram] | None = None,
    selected: Mapping[str, str] | None = None,
) -> EvalReport:
    """Assemble a report, checking every percentage lies in [0, 100].

    Args:
        rows: Metrics per target and split
        config: Configuration snapshot that produced the metrics
        histograms: Concept rating histograms by ``model/target`` key
        selected: Dev-selected checkpoint target per model

    Raises:
        ProbeInputError: If a percentage is out of range or a row repeats
    """
    seen: set[tuple[str, str, str, str, str]] = set()
    for row in rows:
        key = (row.model, row.training_set, row.target, row.dataset, row.split)
        if key in seen:
            raise ProbeInputError(f"Duplicate metrics row {key}")
        seen.add(key)
        for name, value in row.percentages().items():
            if value is not None and not 0 <= value <= 100:
                raise ProbeInputError(f"{name} {value} out of range for {row.model}/{row.target}")
    ordered = sorted(rows, key=lambda r: (r.model, r.training_set, r.target, r.dataset, r.split))
    return EvalReport(
        rows=tuple(ordered),
        histograms=dict(histograms or {}),
        selected=dict(selected or {}),
        fingerprint=config_fingerprint(config),
    )
