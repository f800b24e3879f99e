"""Capability probes: concept rating, entity extraction and executable-code rate."""

from .errors import ProbeInputError, VerdictParseError
from .metrics import concept_accuracy, entity_accuracy, executable_rate, rating_distribution
from .parse import ConceptPayload, parse_concept_verdict, parse_entity_verdict
from .report import EvalReport, TargetMetrics, build_eval_report, config_fingerprint
from .run import (
    JUDGE_TEMPERATURE,
    check_probe_inputs,
    run_concept_probe,
    run_entity_probe,
    student_code,
)
from .types import (
    RATING_LEVELS,
    ConceptProbeItem,
    EntityProbeItem,
    JudgeVerdict,
    ParseFailure,
    ProbeOutcome,
    RatingHistogram,
    VerdictKind,
)

__all__ = [
    "JUDGE_TEMPERATURE",
    "RATING_LEVELS",
    "ConceptPayload",
    "ConceptProbeItem",
    "EntityProbeItem",
    "EvalReport",
    "JudgeVerdict",
    "ParseFailure",
    "ProbeInputError",
    "ProbeOutcome",
    "RatingHistogram",
    "TargetMetrics",
    "VerdictKind",
    "VerdictParseError",
    "build_eval_report",
    "check_probe_inputs",
    "concept_accuracy",
    "config_fingerprint",
    "entity_accuracy",
    "executable_rate",
    "parse_concept_verdict",
    "parse_entity_verdict",
    "rating_distribution",
    "run_concept_probe",
    "run_entity_probe",
    "student_code",
]
