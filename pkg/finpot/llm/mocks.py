"""Deterministic responders for offline (``--mock``) runs and tests."""

import json
import re
from collections.abc import Mapping
from pathlib import Path

from ..prompts import MARKERS
from ..storage import sha256_text
from ..structure import is_concept_line, parse_segments
from .providers import Responder
from .types import CompletionRequest, prompt_hash

_HINT = re.compile(r"Answer Hint:.*?::\s*(.+)$", re.MULTILINE)
_STEP = re.compile(r"\s*([a-z_]+)\s*\(([^()]*)\)\s*,?", re.IGNORECASE)
_STEPS = re.compile(r"(?:\s*[a-z_]+\s*\([^()]*\)\s*,?)+\s*", re.IGNORECASE)
_INFIX_NUMBER = re.compile(r"\d+(?:,\d{3})*(?:\.\d+)?%?|\.\d+%?")
_INFIX_ALLOWED = re.compile(r"^[\d\s.,%+\-*/()]+$")
_EPOCH = re.compile(r"/epoch-(\d+)$")

_OPERATORS = {
    "add": "+",
    "sum": "+",
    "subtract": "-",
    "multiply": "*",
    "divide": "/",
    "exp": "**",
}

PROSE_ANSWER = "To answer this question we need to look at the values in the passage and the table."


class UnsupportedProgram(ValueError):
    """The hint program uses an operation the mock teacher cannot translate."""


def _number(token: str) -> str:
    token = token.strip()
    lowered = token.lower()
    if lowered.startswith("const_"):
        value = lowered.removeprefix("const_")
        return "-1" if value == "m1" else value
    if token.endswith("%"):
        return f"{float(token[:-1].replace(',', '')) / 100:g}"
    text = token.replace(",", "").replace("$", "")
    float(text)
    return text


def _translate_steps(program: str) -> list[str]:
    if not _STEPS.fullmatch(program):
        raise UnsupportedProgram(program)
    steps = _STEP.findall(program)
    one_based = "#0" not in program

    entities: list[str] = []
    values: dict[str, str] = {}
    lines: list[str] = []
    formulas: list[str] = []

    def operand(token: str) -> tuple[str, str]:
        token = token.strip()
        if token.startswith("#"):
            index = int(token[1:]) - (1 if one_based else 0)
            if not 0 <= index < len(formulas):
                raise UnsupportedProgram(program)
            return f"step_{index}", f"({formulas[index]})"
        try:
            literal = _number(token)
        except ValueError:
            raise UnsupportedProgram(program) from None
        if literal not in values:
            name = f"value_{len(values) + 1}"
            values[literal] = name
            entities.append(f"{name} = {literal}")
        return values[literal], values[literal]

    final_greater = False
    for index, (op, args) in enumerate(steps):
        op = op.lower()
        parts = [a for a in args.split(",") if a.strip()]
        if len(parts) != 2:
            raise UnsupportedProgram(program)
        (left, left_f), (right, right_f) = operand(parts[0]), operand(parts[1])
        if op == "greater":
            symbol = ">"
            final_greater = index == len(steps) - 1
        elif op in _OPERATORS:
            symbol = _OPERATORS[op]
        else:
            raise UnsupportedProgram(program)
        lines.append(f"step_{index} = {left} {symbol} {right}")
        formulas.append(f"{left_f} {symbol} {right_f}")

    last = f"step_{len(steps) - 1}"
    answer = f'ans = "yes" if {last} else "no"' if final_greater else f"ans = {last}"
    return [f"#Calculate: {last} = {formulas[-1]}", *entities, *lines, answer]


def _translate_infix(expression: str) -> list[str]:
    if not _INFIX_ALLOWED.match(expression) or not _INFIX_NUMBER.search(expression):
        raise UnsupportedProgram(expression)
    entities: list[str] = []

    def name(match: re.Match[str]) -> str:
        index = len(entities) + 1
        entities.append(f"value_{index} = {_number(match.group(0))}")
        return f"value_{index}"

    formula = _INFIX_NUMBER.sub(name, expression).strip()
    return [f"#Calculate: result = {formula}", *entities, f"result = {formula}", "ans = result"]


def hint_to_program(hint: str) -> str:
    """Translate an answer-hint program into a structured Python program.

    Supports operator programs such as ``subtract(1923, 2040), divide(#0, 2040)``
    and plain arithmetic expressions such as ``(19.9 - 11.8) / 11.8``.

    Raises:
        UnsupportedProgram: If the hint cannot be translated
    """
    hint = hint.strip()
    if "(" in hint and re.match(r"^\s*[A-Za-z_]+\s*\(", hint):
        lines = _translate_steps(hint)
    else:
        lines = _translate_infix(hint)
    return "\n".join(lines)


def _query(request: CompletionRequest) -> str:
    return request.prompt.query


def teacher_responder(request: CompletionRequest) -> str:
    """Answer a teacher prompt by translating its answer hint."""
    match = _HINT.search(_query(request))
    if match is None:
        return PROSE_ANSWER
    try:
        program = hint_to_program(match.group(1))
    except UnsupportedProgram:
        return PROSE_ANSWER
    return f"{program}\n{MARKERS.python_close}"


def question_key(question: str) -> str:
    """Lookup key of a question in a student answer table."""
    return sha256_text(" ".join(question.split()).casefold())


def _last_question(query: str) -> str | None:
    for marker in (MARKERS.last_question, MARKERS.question):
        for line in query.splitlines():
            if line.startswith(marker):
                return line.removeprefix(marker).strip()
    return None


def make_student_responder(answers: Mapping[str, str]) -> Responder:
    """Create a student responder that answers from a question table.

    Args:
        answers: question_key(question) -> program

    Base models (no ``/epoch-k`` suffix) answer in prose for prompts with an
    odd hash. A checkpoint at epoch k answers in prose when the prompt hash is
    divisible by k + 3. Entity probe prompts get the program minus its concept
    line.
    """

    def respond(request: CompletionRequest) -> str:
        query = _query(request)
        question = _last_question(query)
        program = answers.get(question_key(question)) if question else None
        digest = int(prompt_hash(request.prompt)[:8], 16)
        epoch_match = _EPOCH.search(request.model_id)
        if program is None:
            return PROSE_ANSWER
        if epoch_match is None or epoch_match.group(1) == "0":
            if digest % 2:
                return PROSE_ANSWER
        elif digest % (int(epoch_match.group(1)) + 3) == 0:
            return f"{PROSE_ANSWER}\n###Final Answer: unknown"
        lines = program.splitlines()
        prefilled = query.rsplit(MARKERS.python_open, 1)[-1].splitlines()
        if any(is_concept_line(line) for line in prefilled) and lines and is_concept_line(lines[0]):
            lines = lines[1:]
        return "\n".join(lines) + f"\n{MARKERS.python_close}"

    return respond


def _judge_sections(text: str) -> tuple[str, str]:
    gold = text.split("\nGold code: ", 1)[-1]
    gold, _, student = gold.partition("\nStudent generated code: ")
    return gold.strip(), student.strip()


def _formula(line: str | None) -> str:
    if line is None:
        return ""
    body = line.split(":", 1)[-1]
    return "".join(body.split("=", 1)[-1].split())


def judge_responder(request: CompletionRequest) -> str:
    """Rate concept prompts by formula overlap and entity prompts by literal overlap."""
    gold, student = _judge_sections(request.prompt.text)
    gold_segments = parse_segments(gold)
    student_segments = parse_segments(student)
    if "'Star rating'" in request.prompt.text:
        if gold.strip() == student.strip() or (
            student_segments.concept_line is not None
            and _formula(student_segments.concept_line) == _formula(gold_segments.concept_line)
        ):
            rating = 5
        elif student_segments.concept_line is not None:
            rating = 3
        elif student_segments.answer_assignment_present:
            rating = 2
        else:
            rating = 1
        return f"{{'Explanation': 'Compared the student formula with the gold formula.', 'Star rating': [{rating}]}}"
    gold_literals = sorted(literal for _, literal in gold_segments.entities)
    student_literals = sorted(literal for _, literal in student_segments.entities)
    verdict = "CORRECT" if gold_literals and gold_literals == student_literals else "INCORRECT"
    return f"Compared the extracted entity values.\nVerdict: {verdict}"


def load_script(path: Path) -> dict[str, str]:
    """Load a mock script mapping prompt hashes to completions.

    Accepts either an object ``{hash: completion}`` or a list of
    ``{"prompt_hash": ..., "completion": ...}`` rows.
    """
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        return {str(k): str(v) for k, v in data.items()}
    return {str(row["prompt_hash"]): str(row["completion"]) for row in data}
