"""Error classes for grading."""

from ..errors import FinpotError


class AggregationError(FinpotError):
    """A metric cannot be aggregated from the given inputs."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="AGGREGATION_ERROR")
