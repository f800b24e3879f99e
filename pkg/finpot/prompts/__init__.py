"""Prompt construction for every model call in the pipeline."""

from .builders import (
    apply_chat_envelope,
    build_baseline_prompt,
    build_concept_judge_prompt,
    build_entity_judge_prompt,
    build_entity_probe_prompt,
    build_finetune_pair,
    build_finetune_prompt,
    build_teacher_prompt,
    envelope_completion,
    judge_question,
    passage_block,
    render_exemplar,
)
from .errors import ProbeConstructionError, PromptTemplateError
from .exemplars import EXEMPLARS_PER_SET, load_exemplars
from .types import (
    MARKERS,
    ChatEnvelope,
    CuratedSample,
    Exemplar,
    ExemplarSet,
    MarkerSet,
    PromptText,
    TemplateKind,
)

__all__ = [
    "EXEMPLARS_PER_SET",
    "MARKERS",
    "ChatEnvelope",
    "CuratedSample",
    "Exemplar",
    "ExemplarSet",
    "MarkerSet",
    "ProbeConstructionError",
    "PromptTemplateError",
    "PromptText",
    "TemplateKind",
    "apply_chat_envelope",
    "build_baseline_prompt",
    "build_concept_judge_prompt",
    "build_entity_judge_prompt",
    "build_entity_probe_prompt",
    "build_finetune_pair",
    "build_finetune_prompt",
    "build_teacher_prompt",
    "envelope_completion",
    "judge_question",
    "load_exemplars",
    "passage_block",
    "render_exemplar",
]
