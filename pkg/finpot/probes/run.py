"""Concept and entity-extraction probes driven through the judge backend."""

import logging
from collections.abc import Callable, Iterable, Sequence

from ..llm import CompletionRequest, LLMClient
from ..prompts import (
    ChatEnvelope,
    apply_chat_envelope,
    build_concept_judge_prompt,
    build_entity_judge_prompt,
    build_entity_probe_prompt,
    judge_question,
)
from ..sandbox import ExtractionError, extract_program
from ..structure import first_concept_line
from .errors import ProbeInputError, VerdictParseError
from .parse import parse_concept_verdict, parse_entity_verdict
from .types import (
    ConceptProbeItem,
    EntityProbeItem,
    JudgeVerdict,
    ParseFailure,
    ProbeOutcome,
    VerdictKind,
)

logger = logging.getLogger(__name__)

JUDGE_TEMPERATURE = 0.0


def student_code(output: str) -> str:
    """Program text of a student output, or the raw output when none is found."""
    try:
        return extract_program(output)
    except ExtractionError:
        return output.strip()


def check_probe_inputs(item_ids: Iterable[str], curated_ids: Iterable[str]) -> None:
    """Reject probe items whose teacher program was not curated.

    Raises:
        ProbeInputError: If an item id is not among the curated ids
    """
    extra = sorted(set(item_ids) - set(curated_ids))
    if extra:
        raise ProbeInputError(
            f"{len(extra)} probe items have no curated teacher program: {extra[:5]}"
        )


async def _judge(
    client: LLMClient,
    judge_model: str,
    kind: VerdictKind,
    prompts: dict[str, CompletionRequest],
    parse: Callable[[str, str], JudgeVerdict],
) -> tuple[list[JudgeVerdict], list[ParseFailure]]:
    ids = sorted(prompts)
    results = await client.complete_many([prompts[i] for i in ids])
    verdicts: list[JudgeVerdict] = []
    failures: list[ParseFailure] = []
    for record_id, result in zip(ids, results, strict=True):
        try:
            verdicts.append(parse(result.text, record_id))
        except VerdictParseError as e:
            logger.warning("Unparseable %s verdict from %s for %s", kind, judge_model, record_id)
            failures.append(ParseFailure(record_id, kind, e.raw_response, str(e)))
    return verdicts, failures


async def run_concept_probe(
    client: LLMClient, judge_model: str, items: Sequence[ConceptProbeItem]
) -> ProbeOutcome:
    """Rate each student output's financial concept from 1 to 5.

    Outputs are judged whether or not they execute; prose answers are passed
    to the judge as they are.

    Args:
        client: Client with the judge backend registered
        judge_model: Judge model id
        items: Student outputs with their gold programs

    Returns:
        Verdicts sorted by record id and the unparseable responses
    """
    if not items:
        raise ProbeInputError("No items for the concept probe")
    requests = {
        item.record_id: CompletionRequest(
            model_id=judge_model,
            prompt=build_concept_judge_prompt(
                item.question, item.gold_program, student_code(item.student_output) or "(empty)"
            ),
            temperature=JUDGE_TEMPERATURE,
        )
        for item in items
    }
    verdicts, failures = await _judge(client, judge_model, "concept", requests, parse_concept_verdict)
    logger.info("Concept probe: %d verdicts, %d parse failures", len(verdicts), len(failures))
    return ProbeOutcome(verdicts=tuple(verdicts), failures=tuple(failures))


async def run_entity_probe(
    client: LLMClient,
    student_model: str,
    judge_model: str,
    items: Sequence[EntityProbeItem],
    envelope: ChatEnvelope | None = None,
) -> ProbeOutcome:
    """Pre-fill the teacher's concept line, let the student continue, and judge the entities.

    Args:
        client: Client with the student and judge backends registered
        student_model: Student model id (a base model or a checkpoint)
        judge_model: Judge model id
        items: Curated records with their teacher programs
        envelope: Student chat envelope

    Returns:
        Verdicts sorted by record id, the unparseable responses and the
        student continuations by record id
    """
    if not items:
        raise ProbeInputError("No items for the entity probe")
    by_id = {item.record.id: item for item in items}
    ids = sorted(by_id)
    student_requests = [
        CompletionRequest(
            model_id=student_model,
            prompt=apply_chat_envelope(
                build_entity_probe_prompt(by_id[i].record, by_id[i].teacher_program), envelope
            ),
        )
        for i in ids
    ]
    continuations = await client.complete_many(student_requests)

    outputs: dict[str, str] = {}
    judge_requests: dict[str, CompletionRequest] = {}
    for record_id, result in zip(ids, continuations, strict=True):
        item = by_id[record_id]
        outputs[record_id] = result.text
        concept = first_concept_line(item.teacher_program)
        code = f"{concept}\n{student_code(result.text)}"
        judge_requests[record_id] = CompletionRequest(
            model_id=judge_model,
            prompt=build_entity_judge_prompt(judge_question(item.record), item.teacher_program, code),
            temperature=JUDGE_TEMPERATURE,
        )
    verdicts, failures = await _judge(client, judge_model, "entity", judge_requests, parse_entity_verdict)
    logger.info("Entity probe for %s: %d verdicts, %d parse failures", student_model, len(verdicts), len(failures))
    return ProbeOutcome(verdicts=tuple(verdicts), failures=tuple(failures), student_outputs=outputs)
