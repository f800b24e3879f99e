"""Type definitions for the llm module."""

import json
from dataclasses import dataclass
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ..prompts import ChatEnvelope, PromptText
from ..storage import sha256_text
from .errors import LLMValidationError

FinishReason = Literal["stop", "length", "error"]
ProviderName = Literal["openai", "scripted"]
ApiMode = Literal["chat", "completion"]

DEFAULT_TEMPERATURE = 0.0
DEFAULT_TOP_P = 0.9
DEFAULT_MAX_TOKENS = 1000


class BackendProfile(BaseModel):
    """Connection and rate settings for one model backend."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    model_id: str
    provider: ProviderName = "openai"
    api_mode: ApiMode = "chat"
    base_url: str | None = None
    base_url_env: str | None = None
    api_key_env: str | None = None
    max_concurrency: int = Field(default=4, gt=0)
    max_retries: int = Field(default=3, ge=0)
    backoff_seconds: float = Field(default=1.0, ge=0)
    request_timeout: float = Field(default=120.0, gt=0)
    envelope: ChatEnvelope | None = None


@dataclass(frozen=True)
class CompletionRequest:
    """One completion call."""

    model_id: str
    prompt: PromptText
    temperature: float = DEFAULT_TEMPERATURE
    top_p: float = DEFAULT_TOP_P
    max_tokens: int = DEFAULT_MAX_TOKENS

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise LLMValidationError(f"temperature must be >= 0, got {self.temperature}")
        if not 0 < self.top_p <= 1:
            raise LLMValidationError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.max_tokens <= 0:
            raise LLMValidationError(f"max_tokens must be > 0, got {self.max_tokens}")


@dataclass(frozen=True)
class CompletionResult:
    """Text returned for a completion request."""

    text: str
    finish_reason: FinishReason = "stop"
    latency: float = 0.0
    from_cache: bool = False
    retries: int = 0


def canonical_prompt(prompt: PromptText) -> str:
    """Prompt text with normalized newlines; chat prompts include their roles."""
    if prompt.role_layout == "chat" and prompt.messages:
        return json.dumps(
            [[role, content.replace("\r\n", "\n")] for role, content in prompt.messages],
            ensure_ascii=False,
        )
    return prompt.text.replace("\r\n", "\n")


def prompt_hash(prompt: PromptText | str) -> str:
    """Stable hash of a prompt, used as the key of mock scripts."""
    text = prompt if isinstance(prompt, str) else canonical_prompt(prompt)
    return sha256_text(text.replace("\r\n", "\n"))


def request_key(request: CompletionRequest) -> str:
    """Cache key over model, canonical prompt and sampling parameters."""
    payload = [
        request.model_id,
        canonical_prompt(request.prompt),
        request.temperature,
        request.top_p,
        request.max_tokens,
    ]
    return sha256_text(json.dumps(payload, ensure_ascii=False))
