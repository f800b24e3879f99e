"""Backend wiring for a run: real providers or one scripted mock."""

import logging
from collections.abc import Mapping
from pathlib import Path

from ..config import ModelProfile
from ..llm import (
    CompletionCache,
    CompletionProvider,
    CompletionRequest,
    LLMClient,
    ScriptedProvider,
    create_provider,
    judge_responder,
    make_student_responder,
    teacher_responder,
)

logger = logging.getLogger(__name__)

_JUDGE_KINDS = frozenset({"concept_judge", "entity_judge"})


class MockResponder:
    """Routes scripted requests to the teacher, judge or student mock by prompt kind.

    ``answers`` maps ``question_key(question)`` to a program and may be
    filled after construction.
    """

    def __init__(self) -> None:
        self.answers: dict[str, str] = {}
        self._student = make_student_responder(self.answers)

    def __call__(self, request: CompletionRequest) -> str:
        kind = request.prompt.kind
        if kind == "teacher":
            return teacher_responder(request)
        if kind in _JUDGE_KINDS:
            return judge_responder(request)
        return self._student(request)


class Backends:
    """Registers profiles with an LLM client on first use."""

    def __init__(
        self,
        client: LLMClient,
        profiles: Mapping[str, ModelProfile],
        mock: bool = False,
    ) -> None:
        self.client = client
        self.profiles = profiles
        self.mock = MockResponder() if mock else None
        self._scripted = ScriptedProvider(fallback=self.mock) if self.mock else None
        self._providers: dict[str, CompletionProvider] = {}

    def _provider(self, profile: ModelProfile) -> CompletionProvider:
        if self._scripted is not None:
            return self._scripted
        if profile.id not in self._providers:
            self._providers[profile.id] = create_provider(profile)
        return self._providers[profile.id]

    def model(self, profile_id: str, model_id: str | None = None) -> str:
        """Register a profile (optionally under another model id) and return the model id.

        Checkpoints are served under their own model ids through the
        student's endpoint.
        """
        profile = self.profiles[profile_id]
        model_id = model_id or profile.model_id
        if not self.client.has_backend(model_id):
            served = profile if model_id == profile.model_id else profile.model_copy(update={"model_id": model_id})
            self.client.register(served, self._provider(profile))
            logger.debug("Registered backend %s for profile %s", model_id, profile_id)
        return model_id

    def set_student_answers(self, answers: Mapping[str, str]) -> None:
        """Fill the mock student's question table; ignored for real backends."""
        if self.mock is not None:
            self.mock.answers.clear()
            self.mock.answers.update(answers)


def create_client(cache_dir: Path | None) -> LLMClient:
    """LLM client with an on-disk completion cache."""
    return LLMClient(cache=CompletionCache(cache_dir) if cache_dir else None)
