"""Completion provider implementations."""

import asyncio
import logging
import os
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass

import httpx
import openai
from openai import AsyncOpenAI

from .errors import BackendError, LLMConfigError, TransientBackendError
from .types import BackendProfile, CompletionRequest, FinishReason, prompt_hash

logger = logging.getLogger(__name__)

Responder = Callable[[CompletionRequest], str]


@dataclass(frozen=True)
class ProviderResponse:
    """Raw provider output."""

    text: str
    finish_reason: FinishReason = "stop"


class CompletionProvider:
    """Base interface for completion providers."""

    @property
    def name(self) -> str:
        """Provider name."""
        raise NotImplementedError

    async def complete(self, request: CompletionRequest) -> ProviderResponse:
        """Run one completion.

        Args:
            request: Completion request

        Returns:
            Provider response

        Raises:
            TransientBackendError: For failures worth retrying
            BackendError: For failures that are not
        """
        raise NotImplementedError

    async def close(self) -> None:
        """Release provider resources."""


_TRANSIENT = (
    openai.RateLimitError,
    openai.APITimeoutError,
    openai.APIConnectionError,
    openai.InternalServerError,
    httpx.TransportError,
)


def _finish_reason(value: str | None) -> FinishReason:
    if value == "length":
        return "length"
    if value in ("stop", None):
        return "stop"
    return "error"


class OpenAIProvider(CompletionProvider):
    """OpenAI-compatible provider (hosted teacher/judge or vLLM-served students).

    ``chat`` mode calls the chat completions endpoint; ``completion`` mode calls
    the plain completions endpoint, which vLLM uses for LoRA adapters.
    """

    def __init__(self, profile: BackendProfile) -> None:
        """Initialize the provider.

        Args:
            profile: Backend profile with endpoint and credential variable names

        Raises:
            LLMConfigError: If a named credential variable is unset
        """
        api_key = "EMPTY"
        if profile.api_key_env:
            api_key = os.getenv(profile.api_key_env, "")
            if not api_key:
                raise LLMConfigError(
                    f"Environment variable {profile.api_key_env} is not set for {profile.model_id}"
                )
        base_url = profile.base_url
        if profile.base_url_env:
            base_url = os.getenv(profile.base_url_env) or base_url
        self._profile = profile
        self._client = AsyncOpenAI(
            api_key=api_key,
            base_url=base_url,
            timeout=httpx.Timeout(profile.request_timeout, connect=10.0),
            max_retries=0,
        )

    @property
    def name(self) -> str:
        return "openai"

    async def complete(self, request: CompletionRequest) -> ProviderResponse:
        try:
            if self._profile.api_mode == "chat":
                messages = request.prompt.messages or (("user", request.prompt.text),)
                response = await self._client.chat.completions.create(
                    model=request.model_id,
                    messages=[{"role": role, "content": content} for role, content in messages],
                    temperature=request.temperature,
                    top_p=request.top_p,
                    max_tokens=request.max_tokens,
                )
                choice = response.choices[0]
                return ProviderResponse(
                    text=choice.message.content or "",
                    finish_reason=_finish_reason(choice.finish_reason),
                )
            response = await self._client.completions.create(
                model=request.model_id,
                prompt=request.prompt.text,
                temperature=request.temperature,
                top_p=request.top_p,
                max_tokens=request.max_tokens,
            )
            choice = response.choices[0]
            return ProviderResponse(text=choice.text or "", finish_reason=_finish_reason(choice.finish_reason))
        except _TRANSIENT as e:
            raise TransientBackendError(f"{type(e).__name__}: {e}") from e
        except openai.APIStatusError as e:
            raise BackendError(f"HTTP {e.status_code} from {request.model_id}: {e.message}", cause=e) from e
        except openai.OpenAIError as e:
            raise BackendError(str(e), cause=e) from e

    async def close(self) -> None:
        await self._client.close()


class ScriptedProvider(CompletionProvider):
    """Deterministic provider answering from a prompt-hash script.

    Prompts missing from the script go to ``fallback`` when given. ``failures``
    maps a prompt hash (or ``"*"`` for every prompt) to the number of transient
    failures raised before the call succeeds.
    """

    def __init__(
        self,
        script: dict[str, str] | None = None,
        fallback: Responder | None = None,
        failures: dict[str, int] | None = None,
        delay: float = 0.0,
    ) -> None:
        self._script = dict(script or {})
        self._fallback = fallback
        self._failures = Counter(failures or {})
        self._delay = delay
        self.calls = 0
        self.calls_by_hash: Counter[str] = Counter()
        self.in_flight = 0
        self.max_in_flight = 0

    @property
    def name(self) -> str:
        return "scripted"

    def _take_failure(self, key: str) -> bool:
        for k in (key, "*"):
            if self._failures[k] > 0:
                self._failures[k] -= 1
                return True
        return False

    async def complete(self, request: CompletionRequest) -> ProviderResponse:
        key = prompt_hash(request.prompt)
        self.calls += 1
        self.calls_by_hash[key] += 1
        self.in_flight += 1
        self.max_in_flight = max(self.max_in_flight, self.in_flight)
        try:
            if self._delay:
                await asyncio.sleep(self._delay)
            else:
                await asyncio.sleep(0)
            if self._take_failure(key):
                raise TransientBackendError(f"Scripted transient failure for {key[:12]}")
            if key in self._script:
                return ProviderResponse(text=self._script[key])
            if self._fallback is not None:
                return ProviderResponse(text=self._fallback(request))
            raise BackendError(f"No scripted completion for prompt {key[:12]}")
        finally:
            self.in_flight -= 1


def create_provider(profile: BackendProfile, fallback: Responder | None = None) -> CompletionProvider:
    """Create the provider a profile names.

    Args:
        profile: Backend profile
        fallback: Responder for scripted providers

    Returns:
        Provider instance
    """
    if profile.provider == "scripted":
        return ScriptedProvider(fallback=fallback)
    if profile.provider == "openai":
        return OpenAIProvider(profile)
    raise LLMConfigError(f"Unknown provider {profile.provider!r}")
