"""Error classes for capability probes."""

from ..errors import FinpotError


class VerdictParseError(FinpotError):
    """A judge response carries no usable verdict."""

    def __init__(self, message: str, raw_response: str) -> None:
        super().__init__(message, code="VERDICT_PARSE_ERROR")
        self.raw_response = raw_response


class ProbeInputError(FinpotError):
    """Probe inputs are empty or inconsistent."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="PROBE_INPUT_ERROR")
