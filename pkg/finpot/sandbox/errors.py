"""Error classes for the sandbox module.

Program failures are reported as ExecutionResult statuses, not exceptions.
"""

from ..errors import FinpotError


class SandboxError(FinpotError):
    """Base exception for sandbox errors."""

    def __init__(self, message: str, code: str = "SANDBOX_ERROR") -> None:
        super().__init__(message, code=code)


class ExtractionError(SandboxError):
    """No program text could be extracted from a completion."""

    def __init__(self, message: str = "No program found in completion") -> None:
        super().__init__(message, code="EXTRACTION_ERROR")


class SandboxLimitError(SandboxError):
    """Sandbox limits are invalid."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="LIMIT_ERROR")
