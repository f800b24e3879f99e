"""Prompt builders for teacher generation, baselines, fine-tuning and judging.

Every builder is a pure function of its inputs. Program-writing prompts share
one query layout::

    <header>
    ###Passage: <text>
    <linearized table>
    ###Question: <question>            (or ###Questions: / ###Last Question:)
    ###Instructions: <instruction>     (baselines and fine-tuning only)
    Answer Hint: ...                   (teacher prompts with a hint only)
    ###Python
"""

from typing import Literal

from ..corpus import QARecord, linearize_table
from ..structure import StructureError, first_concept_line
from .errors import ProbeConstructionError, PromptTemplateError
from .exemplars import EXEMPLARS_PER_SET
from .templates import (
    CONCEPT_JUDGE_INSTRUCTION,
    ENTITY_JUDGE_INSTRUCTION,
    ENTITY_VERDICT_INSTRUCTION,
    FINETUNE_INSTRUCTION,
    EXEMPLAR_HEADERS,
    HEADERS,
    HINT_LINE,
    JUDGE_PAYLOAD,
    ZERO_SHOT_INSTRUCTION,
)
from .types import (
    MARKERS,
    ChatEnvelope,
    CuratedSample,
    Exemplar,
    ExemplarSet,
    PromptText,
    TemplateKind,
)

EXEMPLAR_SEPARATOR = "\n\n"


def passage_block(passage_text: str, table: tuple[tuple[str, ...], ...] | list) -> str:
    """Join passage text and the linearized table."""
    return "\n".join(part for part in (passage_text.strip(), linearize_table(table)) if part)


def _question_lines(kind: str, question: str, prior_questions: tuple[str, ...]) -> list[str]:
    if kind == "convfinqa":
        return [
            f"{MARKERS.questions} {' '.join(prior_questions)}".rstrip(),
            f"{MARKERS.last_question} {question}",
        ]
    return [f"{MARKERS.question} {question}"]


def _header(kind: str, headers: dict[str, str] = HEADERS) -> str:
    try:
        return headers[kind]
    except KeyError:
        raise PromptTemplateError(f"No prompt header for dataset kind {kind!r}") from None


def _query_lines(record: QARecord) -> list[str]:
    return [
        _header(record.dataset_kind),
        f"{MARKERS.passage} {passage_block(record.passage_text, record.table)}",
        *_question_lines(record.dataset_kind, record.question, record.prior_questions),
    ]


def render_exemplar(kind: str, exemplar: Exemplar) -> str:
    """Render one demonstration followed by its program.

    Demonstrations use the query layout under their own header wording.
    """
    return "\n".join(
        [
            _header(kind, EXEMPLAR_HEADERS),
            f"{MARKERS.passage} {exemplar.passage}",
            *_question_lines(kind, exemplar.question, exemplar.prior_questions),
            MARKERS.python_open,
            exemplar.program.strip(),
            MARKERS.python_close,
        ]
    )


def _check_exemplars(record: QARecord, exemplars: ExemplarSet | None) -> ExemplarSet:
    if exemplars is None or len(exemplars.exemplars) != EXEMPLARS_PER_SET:
        count = 0 if exemplars is None else len(exemplars.exemplars)
        raise PromptTemplateError(
            f"Few-shot prompts need {EXEMPLARS_PER_SET} exemplars, got {count}"
        ).with_context(record_id=record.id)
    if exemplars.dataset_kind != record.dataset_kind:
        raise PromptTemplateError(
            f"Exemplar set for {exemplars.dataset_kind!r} used with a {record.dataset_kind!r} record"
        ).with_context(record_id=record.id)
    return exemplars


def _with_exemplars(exemplars: ExemplarSet, query: str, kind: TemplateKind) -> PromptText:
    shots = EXEMPLAR_SEPARATOR.join(
        render_exemplar(exemplars.dataset_kind, e) for e in exemplars.exemplars
    )
    prefix = shots + EXEMPLAR_SEPARATOR
    return PromptText(text=prefix + query, kind=kind, query_offset=len(prefix))


def build_teacher_prompt(
    record: QARecord, exemplars: ExemplarSet, include_hint: bool = True
) -> PromptText:
    """Build the few-shot program-of-thought prompt sent to the teacher.

    Args:
        record: Record to generate a program for
        exemplars: Four demonstrations of the record's dataset kind
        include_hint: Append the record's gold program as an answer hint

    Returns:
        Teacher prompt ending at the python open marker

    Raises:
        PromptTemplateError: If a hint is requested but the record has no
            gold program, or the exemplar set is unusable
    """
    _check_exemplars(record, exemplars)
    lines = _query_lines(record)
    if include_hint:
        if not record.gold_program:
            raise PromptTemplateError(
                "Answer hint requested but record has no gold program"
            ).with_context(record_id=record.id)
        lines.append(HINT_LINE.format(program=record.gold_program))
    lines.append(MARKERS.python_open)
    return _with_exemplars(exemplars, "\n".join(lines), "teacher")


def build_baseline_prompt(
    record: QARecord,
    mode: Literal["zero_shot", "few_shot"],
    exemplars: ExemplarSet | None = None,
) -> PromptText:
    """Build a zero-shot or few-shot baseline prompt for a student model.

    Raises:
        PromptTemplateError: If few-shot mode lacks a usable exemplar set
    """
    lines = _query_lines(record)
    if mode == "zero_shot":
        lines += [f"{MARKERS.instructions} {ZERO_SHOT_INSTRUCTION}", MARKERS.python_open]
        return PromptText(text="\n".join(lines), kind="zero_shot")
    if mode == "few_shot":
        shots = _check_exemplars(record, exemplars)
        lines.append(MARKERS.python_open)
        return _with_exemplars(shots, "\n".join(lines), "few_shot")
    raise PromptTemplateError(f"Unknown baseline mode {mode!r}")


def build_finetune_prompt(record: QARecord) -> PromptText:
    """Build the fine-tuning prompt (also used for checkpoint inference)."""
    lines = _query_lines(record)
    lines += [f"{MARKERS.instructions} {FINETUNE_INSTRUCTION}", MARKERS.python_open]
    return PromptText(text="\n".join(lines), kind="finetune")


def build_finetune_pair(
    record: QARecord, teacher_program: str, executed_answer: object = None
) -> CuratedSample:
    """Build one prompt-completion pair from a record and its teacher program.

    The completion starts on the line after the python open marker and ends
    with the python close marker. The answer hint never appears.

    Raises:
        PromptTemplateError: If the program is empty
    """
    program = teacher_program.strip()
    if not program:
        raise PromptTemplateError("Teacher program is empty").with_context(record_id=record.id)
    return CuratedSample(
        record_id=record.id,
        dataset_kind=record.dataset_kind,
        prompt=build_finetune_prompt(record).text,
        completion=f"\n{program}\n{MARKERS.python_close}",
        teacher_program=program,
        executed_answer=executed_answer,
    )


def build_entity_probe_prompt(record: QARecord, teacher_program: str) -> PromptText:
    """Build the fine-tuning prompt with the teacher's concept line pre-filled.

    Raises:
        ProbeConstructionError: If the program does not start with a concept
            comment
    """
    try:
        concept = first_concept_line(teacher_program)
    except StructureError as e:
        raise ProbeConstructionError(str(e)).with_context(record_id=record.id) from e
    base = build_finetune_prompt(record)
    return PromptText(text=f"{base.text}\n{concept}", kind="entity_probe")


def _judge_payload(question: str, gold_code: str, student_code: str) -> str:
    for name, value in (("question", question), ("gold_code", gold_code), ("student_code", student_code)):
        if not value or not value.strip():
            raise PromptTemplateError(f"Judge prompt input {name!r} is empty")
    return JUDGE_PAYLOAD.format(
        question=question.strip(), gold_code=gold_code.strip(), student_code=student_code.strip()
    )


def build_concept_judge_prompt(question: str, gold_code: str, student_code: str) -> PromptText:
    """Build the 1-5 star concept-understanding judge prompt."""
    payload = _judge_payload(question, gold_code, student_code)
    return PromptText(text=f"{CONCEPT_JUDGE_INSTRUCTION}\n{payload}", kind="concept_judge")


def build_entity_judge_prompt(question: str, gold_code: str, student_code: str) -> PromptText:
    """Build the entity-extraction judge prompt with its verdict-line instruction."""
    payload = _judge_payload(question, gold_code, student_code)
    text = f"{ENTITY_JUDGE_INSTRUCTION} {ENTITY_VERDICT_INSTRUCTION}\n{payload}"
    return PromptText(text=text, kind="entity_judge")


def judge_question(record: QARecord) -> str:
    """Question text shown to judges; conversations include the prior turns."""
    return " ".join((*record.prior_questions, record.question))


def apply_chat_envelope(prompt: PromptText, envelope: ChatEnvelope | None) -> PromptText:
    """Wrap a prompt in a model-specific envelope.

    Plain envelopes add prefix and suffix text; chat envelopes turn the prompt
    into role messages.
    """
    if envelope is None:
        return prompt
    if envelope.layout == "chat":
        messages: list[tuple[str, str]] = []
        if envelope.system:
            messages.append(("system", envelope.system))
        messages.append(("user", prompt.text))
        return PromptText(
            text=prompt.text,
            kind=prompt.kind,
            role_layout="chat",
            messages=tuple(messages),
            query_offset=prompt.query_offset,
        )
    return PromptText(
        text=f"{envelope.prompt_prefix}{prompt.text}{envelope.prompt_suffix}",
        kind=prompt.kind,
        query_offset=prompt.query_offset + len(envelope.prompt_prefix),
    )


def envelope_completion(completion: str, envelope: ChatEnvelope | None) -> str:
    """Append the envelope's completion suffix (e.g. an end-of-sequence token)."""
    if envelope is None:
        return completion
    return completion + envelope.completion_suffix
