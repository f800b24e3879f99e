"""Error classes for the llm module."""

from ..errors import FinpotError


class LLMError(FinpotError):
    """Base exception for completion errors."""

    def __init__(self, message: str, code: str = "LLM_ERROR") -> None:
        super().__init__(message, code=code)


class LLMConfigError(LLMError):
    """Unknown model id or unusable backend profile."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="CONFIG_ERROR")


class LLMValidationError(LLMError):
    """A completion request violates its parameter bounds."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="VALIDATION_ERROR")


class BackendError(LLMError):
    """A backend call failed for good."""

    def __init__(self, message: str, cause: BaseException | None = None) -> None:
        super().__init__(message, code="BACKEND_ERROR")
        self.cause = cause


class TransientBackendError(LLMError):
    """A backend call failed in a way worth retrying (rate limit, timeout, 5xx)."""

    def __init__(self, message: str = "Transient backend failure") -> None:
        super().__init__(message, code="TRANSIENT_ERROR")
