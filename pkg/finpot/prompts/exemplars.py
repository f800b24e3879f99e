"""Packaged few-shot exemplar sets."""

import json
from functools import cache
from importlib import resources

from .errors import PromptTemplateError
from .types import Exemplar, ExemplarSet

EXEMPLARS_PER_SET = 4


def _lines(value: str | list[str]) -> str:
    return value if isinstance(value, str) else "\n".join(value)


@cache
def load_exemplars(kind: str) -> ExemplarSet:
    """Load the versioned exemplar set shipped for a dataset kind.

    Raises:
        PromptTemplateError: If no set exists for the kind or it is malformed
    """
    source = resources.files(__package__).joinpath("exemplars", f"{kind}.json")
    if not source.is_file():
        raise PromptTemplateError(f"No exemplar set for dataset kind {kind!r}")
    data = json.loads(source.read_text(encoding="utf-8"))
    try:
        exemplars = tuple(
            Exemplar(
                passage=_lines(item["passage"]),
                question=item["question"],
                program=_lines(item["program"]),
                prior_questions=tuple(item.get("prior_questions", ())),
            )
            for item in data["exemplars"]
        )
    except KeyError as e:
        raise PromptTemplateError(f"Exemplar set {kind!r} is missing field {e}") from e
    if len(exemplars) != EXEMPLARS_PER_SET:
        raise PromptTemplateError(
            f"Exemplar set {kind!r} has {len(exemplars)} exemplars, expected {EXEMPLARS_PER_SET}"
        )
    return ExemplarSet(
        dataset_kind=data.get("dataset_kind", kind),
        exemplars=exemplars,
        version=data.get("version", 1),
    )
