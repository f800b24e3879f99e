"""Parsing of judge responses into verdicts."""

import ast
import re
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import VerdictParseError
from .types import RATING_LEVELS, JudgeVerdict

_LOOSE_RATING = re.compile(r"Star\s*rating['\"]?\s*[:=]\s*\[?\s*(-?\d+)", re.IGNORECASE)
_LOOSE_EXPLANATION = re.compile(
    r"Explanation['\"]?\s*[:=]\s*['\"]?(.*?)['\"]?\s*(?:,\s*['\"]?Star\s*rating|$)",
    re.IGNORECASE | re.DOTALL,
)
_VERDICT = re.compile(r"^\W*Verdict\s*:\s*\**\s*(CORRECT|INCORRECT)\b", re.IGNORECASE)


class ConceptPayload(BaseModel):
    """Object-literal form of a concept judge response."""

    model_config = ConfigDict(populate_by_name=True)

    explanation: str = Field(default="", alias="Explanation")
    rating: int = Field(alias="Star rating")

    @field_validator("rating", mode="before")
    @classmethod
    def _unwrap(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)):
            if len(value) != 1:
                raise ValueError("expected a single rating")
            return value[0]
        return value


def _object_literal(text: str) -> dict[str, Any] | None:
    start = text.find("{")
    end = text.rfind("}")
    if start == -1 or end <= start:
        return None
    try:
        obj = ast.literal_eval(text[start : end + 1])
    except (ValueError, SyntaxError, MemoryError, RecursionError):
        return None
    return obj if isinstance(obj, dict) else None


def parse_concept_verdict(response: str, record_id: str = "") -> JudgeVerdict:
    """Parse a concept-rating response.

    The object literal ``{'Explanation': ..., 'Star rating': [n]}`` is read
    first; otherwise the integer after a loose ``Star rating:`` label is used.

    Raises:
        VerdictParseError: If no rating is found or it is outside 1-5
    """
    rating: int | None = None
    explanation = ""
    obj = _object_literal(response)
    if obj is not None:
        try:
            payload = ConceptPayload.model_validate(obj)
            rating, explanation = payload.rating, payload.explanation
        except ValidationError:
            pass
    if rating is None:
        match = _LOOSE_RATING.search(response)
        if match is None:
            raise VerdictParseError("No star rating in judge response", response)
        rating = int(match.group(1))
        loose = _LOOSE_EXPLANATION.search(response)
        explanation = loose.group(1).strip() if loose else ""
    if rating not in RATING_LEVELS:
        raise VerdictParseError(f"Star rating {rating} is outside 1-5", response)
    return JudgeVerdict(
        kind="concept",
        rating=rating,
        explanation=explanation,
        raw_response=response,
        record_id=record_id,
    )


def parse_entity_verdict(response: str, record_id: str = "") -> JudgeVerdict:
    """Parse an entity-extraction response ending in a ``Verdict:`` line.

    Raises:
        VerdictParseError: If no verdict line is present
    """
    lines = response.splitlines()
    for index in range(len(lines) - 1, -1, -1):
        match = _VERDICT.match(lines[index])
        if match:
            return JudgeVerdict(
                kind="entity",
                correct=match.group(1).upper() == "CORRECT",
                explanation="\n".join(lines[:index]).strip(),
                raw_response=response,
                record_id=record_id,
            )
    raise VerdictParseError("No verdict line in judge response", response)
