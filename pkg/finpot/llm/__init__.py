"""Completion clients for teacher, student and judge backends."""

from .cache import CompletionCache
from .client import LLMClient
from .errors import BackendError, LLMConfigError, LLMError, LLMValidationError, TransientBackendError
from .mocks import (
    PROSE_ANSWER,
    UnsupportedProgram,
    hint_to_program,
    judge_responder,
    load_script,
    make_student_responder,
    question_key,
    teacher_responder,
)
from .providers import (
    CompletionProvider,
    OpenAIProvider,
    ProviderResponse,
    Responder,
    ScriptedProvider,
    create_provider,
)
from .types import (
    DEFAULT_MAX_TOKENS,
    DEFAULT_TEMPERATURE,
    DEFAULT_TOP_P,
    BackendProfile,
    CompletionRequest,
    CompletionResult,
    canonical_prompt,
    prompt_hash,
    request_key,
)

__all__ = [
    "DEFAULT_MAX_TOKENS",
    "DEFAULT_TEMPERATURE",
    "DEFAULT_TOP_P",
    "PROSE_ANSWER",
    "BackendError",
    "BackendProfile",
    "CompletionCache",
    "CompletionProvider",
    "CompletionRequest",
    "CompletionResult",
    "LLMClient",
    "LLMConfigError",
    "LLMError",
    "LLMValidationError",
    "OpenAIProvider",
    "ProviderResponse",
    "Responder",
    "ScriptedProvider",
    "TransientBackendError",
    "UnsupportedProgram",
    "canonical_prompt",
    "create_provider",
    "hint_to_program",
    "judge_responder",
    "load_script",
    "make_student_responder",
    "prompt_hash",
    "question_key",
    "request_key",
    "teacher_responder",
]
