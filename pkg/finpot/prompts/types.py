"""Type definitions for prompt construction."""

from dataclasses import dataclass, field
from typing import Any, Literal

TemplateKind = Literal[
    "teacher",
    "zero_shot",
    "few_shot",
    "finetune",
    "entity_probe",
    "concept_judge",
    "entity_judge",
]
RoleLayout = Literal["plain", "chat"]


@dataclass(frozen=True)
class MarkerSet:
    """Section markers used in every program-writing prompt."""

    passage: str = "###Passage:"
    question: str = "###Question:"
    questions: str = "###Questions:"
    last_question: str = "###Last Question:"
    instructions: str = "###Instructions:"
    python_open: str = "###Python"
    python_close: str = "###EndPython"
    hint: str = "Answer Hint:"
    concept_prefix: str = "#Calculate:"


MARKERS = MarkerSet()


@dataclass(frozen=True)
class PromptText:
    """A built prompt.

    ``text`` is always the full prompt. For the chat layout ``messages`` holds
    the ordered (role, content) pairs sent to chat backends. ``query_offset``
    marks where the query section starts, after any exemplars.
    """

    text: str
    kind: TemplateKind
    role_layout: RoleLayout = "plain"
    messages: tuple[tuple[str, str], ...] = ()
    query_offset: int = 0

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("prompt text must be non-empty")

    @property
    def query(self) -> str:
        """The query section of the prompt."""
        return self.text[self.query_offset :]


@dataclass(frozen=True)
class Exemplar:
    """One few-shot demonstration."""

    passage: str
    question: str
    program: str
    prior_questions: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExemplarSet:
    """Ordered demonstrations for one dataset kind."""

    dataset_kind: str
    exemplars: tuple[Exemplar, ...] = field(default_factory=tuple)
    version: int = 1


@dataclass(frozen=True)
class ChatEnvelope:
    """Model-specific wrapping applied to prompts and completions.

    With ``layout == "chat"`` the prompt is sent as chat messages and the
    prefix/suffix strings are ignored.
    """

    layout: RoleLayout = "plain"
    prompt_prefix: str = ""
    prompt_suffix: str = ""
    completion_suffix: str = ""
    system: str | None = None


@dataclass(frozen=True)
class CuratedSample:
    """One fine-tuning prompt-completion pair with its teacher provenance."""

    record_id: str
    dataset_kind: str
    prompt: str
    completion: str
    teacher_program: str
    executed_answer: Any = None

    def to_dict(self) -> dict[str, Any]:
        """Convert to the persisted dictionary form."""
        return {
            "record_id": self.record_id,
            "dataset_kind": self.dataset_kind,
            "prompt": self.prompt,
            "completion": self.completion,
            "teacher_program": self.teacher_program,
            "executed_answer": self.executed_answer,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CuratedSample":
        """Create a CuratedSample from its persisted dictionary form."""
        return cls(
            record_id=data["record_id"],
            dataset_kind=data["dataset_kind"],
            prompt=data["prompt"],
            completion=data["completion"],
            teacher_program=data["teacher_program"],
            executed_answer=data.get("executed_answer"),
        )
