"""Completion client over registered backends."""

import asyncio
import logging
import random
import time
from collections.abc import Awaitable, Callable, Sequence

from .cache import CompletionCache
from .errors import BackendError, LLMConfigError, TransientBackendError
from .providers import CompletionProvider
from .types import BackendProfile, CompletionRequest, CompletionResult

logger = logging.getLogger(__name__)

Sleep = Callable[[float], Awaitable[None]]


class LLMClient:
    """Client routing completion requests to backends by model id.

    Each backend gets its own in-flight bound. Transient failures are retried
    with exponential backoff and jitter.
    """

    def __init__(self, cache: CompletionCache | None = None, sleep: Sleep = asyncio.sleep) -> None:
        """Initialize the client.

        Args:
            cache: Optional completion cache used by cached_complete
            sleep: Awaitable sleep used between retries
        """
        self._cache = cache
        self._sleep = sleep
        self._backends: dict[str, tuple[BackendProfile, CompletionProvider]] = {}
        self._semaphores: dict[str, asyncio.Semaphore] = {}
        self.backend_calls = 0

    @property
    def cache(self) -> CompletionCache | None:
        return self._cache

    def register(self, profile: BackendProfile, provider: CompletionProvider) -> None:
        """Register a backend for ``profile.model_id``."""
        self._backends[profile.model_id] = (profile, provider)
        self._semaphores[profile.model_id] = asyncio.Semaphore(profile.max_concurrency)

    def has_backend(self, model_id: str) -> bool:
        return model_id in self._backends

    def backend(self, model_id: str) -> tuple[BackendProfile, CompletionProvider]:
        """Look up a registered backend.

        Raises:
            LLMConfigError: If no backend is registered for the model id
        """
        try:
            return self._backends[model_id]
        except KeyError:
            raise LLMConfigError(f"No backend registered for model {model_id!r}") from None

    async def complete(self, request: CompletionRequest) -> CompletionResult:
        """Run a completion, retrying transient failures.

        Args:
            request: Completion request

        Returns:
            Completion result with the number of retries used

        Raises:
            LLMConfigError: If the model id is unknown
            BackendError: If the backend fails or retries are exhausted
        """
        profile, provider = self.backend(request.model_id)
        semaphore = self._semaphores[request.model_id]
        attempts = profile.max_retries + 1
        last_error: TransientBackendError | None = None

        for attempt in range(attempts):
            start = time.perf_counter()
            async with semaphore:
                self.backend_calls += 1
                try:
                    response = await provider.complete(request)
                except TransientBackendError as e:
                    last_error = e
                else:
                    return CompletionResult(
                        text=response.text,
                        finish_reason=response.finish_reason,
                        latency=time.perf_counter() - start,
                        retries=attempt,
                    )
            if attempt + 1 < attempts:
                delay = profile.backoff_seconds * 2**attempt
                delay += random.uniform(0, profile.backoff_seconds / 2)
                logger.warning(
                    "Transient failure from %s (attempt %d/%d), retrying in %.1fs: %s",
                    request.model_id,
                    attempt + 1,
                    attempts,
                    delay,
                    last_error,
                )
                await self._sleep(delay)

        raise BackendError(
            f"{request.model_id} failed after {attempts} attempts: {last_error}", cause=last_error
        ).with_context(model_id=request.model_id)

    async def cached_complete(
        self, request: CompletionRequest, cache: CompletionCache | None = None
    ) -> CompletionResult:
        """Serve a request from the cache, calling the backend on a miss."""
        cache = cache or self._cache
        if cache is None:
            return await self.complete(request)
        self.backend(request.model_id)
        hit = cache.get(request)
        if hit is not None:
            return hit
        result = await self.complete(request)
        await cache.put(request, result)
        return result

    async def complete_many(
        self, requests: Sequence[CompletionRequest], use_cache: bool = True
    ) -> list[CompletionResult]:
        """Run requests concurrently; results come back in request order."""
        run = self.cached_complete if use_cache else self.complete
        return list(await asyncio.gather(*(run(r) for r in requests)))

    async def close(self) -> None:
        """Close every registered provider."""
        seen: set[int] = set()
        for _, provider in self._backends.values():
            if id(provider) not in seen:
                seen.add(id(provider))
                await provider.close()
