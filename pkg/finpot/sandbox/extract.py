"""Program extraction from raw completions."""

import re

from ..prompts import MARKERS
from .errors import ExtractionError

_CLOSE = re.compile(r"###\s*End\s*Python", re.IGNORECASE)
_FENCE = re.compile(r"```[ \t]*(?:python|py)?[ \t]*\n(.*?)(?:```|\Z)", re.DOTALL | re.IGNORECASE)


def extract_program(raw_completion: str) -> str:
    """Extract program text from a completion.

    Takes the text after the first ``###Python`` (when present) up to the
    first following close marker (``###EndPython`` or ``###End Python``, when
    present). Completions with neither marker fall back to the first fenced
    code block, then to the whole text.

    Raises:
        ExtractionError: If nothing remains after trimming
    """
    text = raw_completion.replace("\r\n", "\n")
    start = text.find(MARKERS.python_open)
    body_start = start + len(MARKERS.python_open) if start >= 0 else 0
    close = _CLOSE.search(text, body_start)

    if start >= 0 or close is not None:
        program = text[body_start : close.start() if close else len(text)]
    else:
        fence = _FENCE.search(text)
        program = fence.group(1) if fence else text

    program = program.strip()
    if not program:
        raise ExtractionError()
    return program
