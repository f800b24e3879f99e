"""Split generated programs into concept, entity and remaining segments."""

import ast
import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import StructureError

CONCEPT_PATTERN = re.compile(r"^\s*#\s*Calculate\s*:")
ANSWER_PATTERN = re.compile(r"^\s*ans\s*=(?!=)")


class EntityAssignment(NamedTuple):
    """``name = literal`` with the original source line."""

    name: str
    literal: str
    line: str


@dataclass(frozen=True)
class CodeSegments:
    """A program split into its concept, extracted entities and the rest.

    Lines before the concept comment are kept apart in ``leading_lines``.
    """

    concept_line: str | None = None
    entity_assignments: tuple[EntityAssignment, ...] = ()
    remaining_lines: tuple[str, ...] = field(default_factory=tuple)
    answer_assignment_present: bool = False
    leading_lines: tuple[str, ...] = ()

    def lines(self) -> list[str]:
        """Non-blank program lines in their original order."""
        head = [self.concept_line] if self.concept_line is not None else []
        entities = [e.line for e in self.entity_assignments]
        return [*self.leading_lines, *head, *entities, *self.remaining_lines]

    @property
    def entities(self) -> list[tuple[str, str]]:
        """Entity (name, literal) pairs in program order."""
        return [(e.name, e.literal) for e in self.entity_assignments]


def is_concept_line(line: str) -> bool:
    """Whether a line is a ``#Calculate:`` concept comment."""
    return bool(CONCEPT_PATTERN.match(line))


def _literal_assignment(line: str) -> EntityAssignment | None:
    try:
        tree = ast.parse(line.strip())
    except SyntaxError:
        return None
    if len(tree.body) != 1 or not isinstance(tree.body[0], ast.Assign):
        return None
    node = tree.body[0]
    if len(node.targets) != 1 or not isinstance(node.targets[0], ast.Name):
        return None
    value = node.value
    if isinstance(value, ast.UnaryOp) and isinstance(value.op, ast.USub | ast.UAdd):
        value = value.operand
        if not isinstance(value, ast.Constant) or not isinstance(value.value, int | float):
            return None
    elif not isinstance(value, ast.Constant) or not isinstance(value.value, int | float | str):
        return None
    if isinstance(value.value, bool):
        return None
    literal = ast.get_source_segment(line.strip(), node.value) or ""
    return EntityAssignment(node.targets[0].id, literal, line)


def parse_segments(program: str) -> CodeSegments:
    """Parse a program into concept, entity and remaining segments.

    Never raises; absent segments come back empty.
    """
    lines = program.splitlines()
    concept_index = next((i for i, line in enumerate(lines) if is_concept_line(line)), None)
    answer_present = any(ANSWER_PATTERN.match(line) for line in lines)
    if concept_index is None:
        return CodeSegments(
            remaining_lines=tuple(line for line in lines if line.strip()),
            answer_assignment_present=answer_present,
        )

    entities: list[EntityAssignment] = []
    i = concept_index + 1
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        entity = _literal_assignment(lines[i])
        if entity is None:
            break
        entities.append(entity)
        i += 1

    before = [line for line in lines[:concept_index] if line.strip()]
    after = [line for line in lines[i:] if line.strip()]
    return CodeSegments(
        concept_line=lines[concept_index],
        entity_assignments=tuple(entities),
        remaining_lines=tuple(after),
        leading_lines=tuple(before),
        answer_assignment_present=answer_present,
    )


def first_concept_line(program: str) -> str:
    """Return the program's first non-blank line if it is a concept comment.

    Raises:
        StructureError: If the first non-blank line is not a concept comment
    """
    first = next((line for line in program.splitlines() if line.strip()), None)
    if first is None or not is_concept_line(first):
        raise StructureError(f"Program does not start with a concept comment: {first!r}")
    return first
