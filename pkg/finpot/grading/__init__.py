"""Answer grading."""

from .errors import AggregationError
from .match import (
    GradeVerdict,
    MatchConfig,
    accuracy,
    compare_answers,
    gold_precision,
    grade,
    parse_number,
)

__all__ = [
    "AggregationError",
    "GradeVerdict",
    "MatchConfig",
    "accuracy",
    "compare_answers",
    "gold_precision",
    "grade",
    "parse_number",
]
