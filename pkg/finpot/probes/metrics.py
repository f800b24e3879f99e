"""Aggregation of probe verdicts and execution results."""

from collections.abc import Sequence
from decimal import ROUND_HALF_UP, Decimal

from ..grading import accuracy
from ..sandbox import ExecutionResult
from .errors import ProbeInputError
from .types import RATING_LEVELS, JudgeVerdict, RatingHistogram

_TENTH = Decimal("0.1")
_HUNDRED = Decimal(100)
_TOP = RATING_LEVELS.index(5)


def _concept_verdicts(verdicts: Sequence[JudgeVerdict]) -> Sequence[JudgeVerdict]:
    if not verdicts:
        raise ProbeInputError("No verdicts to aggregate")
    if any(v.kind != "concept" for v in verdicts):
        raise ProbeInputError("Expected concept verdicts only")
    return verdicts


def _exact_percent(count: int, total: int) -> Decimal:
    return Decimal(count) * _HUNDRED / Decimal(total)


def _percent(count: int, total: int) -> Decimal:
    return _exact_percent(count, total).quantize(_TENTH, rounding=ROUND_HALF_UP)


def concept_accuracy(verdicts: Sequence[JudgeVerdict]) -> float:
    """Percentage of outputs rated 5, rounded half-up to one decimal.

    Always equal to level 5 of :func:`rating_distribution` for the same verdicts.
    """
    verdicts = _concept_verdicts(verdicts)
    return float(_percent(sum(1 for v in verdicts if v.rating == 5), len(verdicts)))


def entity_accuracy(verdicts: Sequence[JudgeVerdict]) -> float:
    """Percentage of entity verdicts judged correct, two decimals."""
    if not verdicts:
        raise ProbeInputError("No verdicts to aggregate")
    if any(v.kind != "entity" for v in verdicts):
        raise ProbeInputError("Expected entity verdicts only")
    return accuracy([bool(v.correct) for v in verdicts])


def executable_rate(results: Sequence[ExecutionResult]) -> float:
    """Percentage of programs that ran and bound ``ans``, two decimals."""
    if not results:
        raise ProbeInputError("No execution results to aggregate")
    return accuracy([r.ok for r in results])


def rating_distribution(verdicts: Sequence[JudgeVerdict]) -> RatingHistogram:
    """Percentage per rating level, rounded half-up to one decimal.

    Levels 1-4 are nudged by a tenth, largest rounding error first, until the
    levels sum to 100 within 0.1. Level 5 keeps its rounded value so it matches
    :func:`concept_accuracy`.
    """
    verdicts = _concept_verdicts(verdicts)
    total = len(verdicts)
    counts = [sum(1 for v in verdicts if v.rating == level) for level in RATING_LEVELS]
    exact = [_exact_percent(c, total) for c in counts]
    rounded = [_percent(c, total) for c in counts]
    adjustable = [k for k in range(len(RATING_LEVELS)) if k != _TOP]

    while sum(rounded) > _HUNDRED + _TENTH:
        i = max(adjustable, key=lambda k: (rounded[k] - exact[k], -k))
        rounded[i] -= _TENTH
    while sum(rounded) < _HUNDRED - _TENTH:
        i = max(adjustable, key=lambda k: (exact[k] - rounded[k], -k))
        rounded[i] += _TENTH

    return RatingHistogram(
        percents=tuple(float(r) for r in rounded),  # type: ignore[arg-type]
        counts=tuple(counts),  # type: ignore[arg-type]
    )
