"""Error classes for prompt construction."""

from ..errors import FinpotError


class PromptTemplateError(FinpotError):
    """A prompt cannot be built from the given inputs."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="TEMPLATE_ERROR")


class ProbeConstructionError(PromptTemplateError):
    """An entity probe prompt cannot be built."""

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.code = "PROBE_ERROR"
