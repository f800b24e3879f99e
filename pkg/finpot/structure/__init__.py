"""Program segment parsing."""

from .errors import StructureError
from .segments import (
    ANSWER_PATTERN,
    CONCEPT_PATTERN,
    CodeSegments,
    EntityAssignment,
    first_concept_line,
    is_concept_line,
    parse_segments,
)

__all__ = [
    "ANSWER_PATTERN",
    "CONCEPT_PATTERN",
    "CodeSegments",
    "EntityAssignment",
    "StructureError",
    "first_concept_line",
    "is_concept_line",
    "parse_segments",
]
