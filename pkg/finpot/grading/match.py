"""Answer comparison and accuracy aggregation."""

import math
import re
from collections.abc import Sequence
from decimal import ROUND_HALF_EVEN, Decimal, InvalidOperation, localcontext
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from .errors import AggregationError

Scale = Literal["exact", "times_100", "div_100", "string"]

_NUMBER = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def _clean(text: str) -> str:
    return text.strip().replace("$", "").replace(",", "").rstrip("%").strip()


class MatchConfig(BaseModel):
    """Tolerances and equivalence rules for answer comparison."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rel_tol: float = Field(default=5e-3, ge=0)
    abs_tol: float = Field(default=1e-6, ge=0)
    percent_scale_equivalence: bool = True
    gold_precision_rounding: bool = True


class GradeVerdict(BaseModel):
    """Per-sample grading outcome."""

    model_config = ConfigDict(frozen=True)

    match: bool
    scale: Scale | None = None


def parse_number(value: object) -> float | None:
    """Parse an answer into a finite float.

    Numbers pass through; strings may carry ``$``, thousands separators,
    surrounding whitespace and a trailing ``%``. Booleans, nan and inf never
    parse. Values too large for a float also give None; :func:`grade` compares
    those as exact decimals.
    """
    if isinstance(value, bool):
        return None
    if isinstance(value, int | float):
        try:
            number = float(value)
        except OverflowError:
            return None
        return number if math.isfinite(number) else None
    if isinstance(value, Decimal):
        return parse_number(float(value))
    if not isinstance(value, str):
        return None
    text = _clean(value)
    if not _NUMBER.fullmatch(text):
        return None
    number = float(text)
    return number if math.isfinite(number) else None


def gold_precision(gold: object) -> int:
    """Number of decimals printed in the gold answer."""
    if _to_decimal(gold) is None or isinstance(gold, int):
        return 0
    text = _clean(gold) if isinstance(gold, str) else repr(float(gold))
    try:
        exponent = Decimal(text).as_tuple().exponent
    except InvalidOperation:
        return 0
    return max(0, -exponent) if isinstance(exponent, int) else 0


def _to_decimal(value: object) -> Decimal | None:
    """Exact finite value of a numeric answer, however large."""
    if isinstance(value, bool):
        return None
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, int | float):
        return Decimal(value)
    if isinstance(value, Decimal):
        return value if value.is_finite() else None
    if isinstance(value, str) and _NUMBER.fullmatch(_clean(value)):
        return Decimal(_clean(value))
    return None


def _within_decimal(candidate: Decimal, gold: Decimal, decimals: int | None, cfg: MatchConfig) -> bool:
    places = decimals or 0
    with localcontext() as ctx:
        ctx.prec = max(ctx.prec, candidate.adjusted() + places + 2, gold.adjusted() + places + 2)
        if decimals is not None:
            candidate = candidate.quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_EVEN)
        return abs(candidate - gold) <= max(Decimal(cfg.abs_tol), Decimal(cfg.rel_tol) * abs(gold))


def _normalize_text(value: str) -> str:
    return " ".join(value.split()).casefold()


def _within(candidate: float, gold: float, decimals: int | None, cfg: MatchConfig) -> bool:
    if decimals is not None:
        candidate = round(candidate, decimals)
    return abs(candidate - gold) <= max(cfg.abs_tol, cfg.rel_tol * abs(gold))


def grade(predicted: object, gold: object, cfg: MatchConfig | None = None) -> GradeVerdict:
    """Compare a predicted answer with the gold answer.

    Args:
        predicted: Executed answer, any type
        gold: Gold answer
        cfg: Match configuration (defaults when omitted)

    Returns:
        Verdict with the scale that matched, if any
    """
    cfg = cfg or MatchConfig()
    p = parse_number(predicted)
    g = parse_number(gold)
    if p is not None and g is not None:
        decimals = gold_precision(gold) if cfg.gold_precision_rounding else None
        candidates: list[tuple[Scale, float]] = [("exact", p)]
        if cfg.percent_scale_equivalence:
            candidates += [("times_100", p * 100), ("div_100", p / 100)]
        for scale, candidate in candidates:
            if _within(candidate, g, decimals, cfg):
                return GradeVerdict(match=True, scale=scale)
        return GradeVerdict(match=False)
    pd, gd = _to_decimal(predicted), _to_decimal(gold)
    if pd is not None and gd is not None:
        decimals = gold_precision(gold) if cfg.gold_precision_rounding else None
        exact: list[tuple[Scale, Decimal]] = [("exact", pd)]
        if cfg.percent_scale_equivalence:
            exact += [("times_100", pd * 100), ("div_100", pd / 100)]
        for scale, candidate in exact:
            if _within_decimal(candidate, gd, decimals, cfg):
                return GradeVerdict(match=True, scale=scale)
        return GradeVerdict(match=False)
    if isinstance(predicted, str) and isinstance(gold, str):
        if _normalize_text(predicted) == _normalize_text(gold):
            return GradeVerdict(match=True, scale="string")
    return GradeVerdict(match=False)


def compare_answers(predicted: object, gold: object, cfg: MatchConfig | None = None) -> bool:
    """Whether a predicted answer matches the gold answer. Never raises."""
    return grade(predicted, gold, cfg).match


def accuracy(matches: Sequence[bool]) -> float:
    """Percentage of true values, rounded to 2 decimals.

    Raises:
        AggregationError: If the list is empty
    """
    if not matches:
        raise AggregationError("Cannot compute accuracy of an empty list")
    return round(100 * sum(1 for m in matches if m) / len(matches), 2)
