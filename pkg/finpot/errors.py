"""Base error class shared by every finpot module."""

from typing import Any, Self


class FinpotError(Exception):
    """Base exception for finpot errors.

    ``stage`` and ``record_id`` locate a failure inside a run: builders and
    curation name the record, and the pipeline runner stamps the stage a
    failure surfaced in. Anything else goes into ``context``.
    """

    def __init__(
        self,
        message: str,
        code: str = "FINPOT_ERROR",
        *,
        stage: str | None = None,
        record_id: str | None = None,
    ) -> None:
        """Initialize the error.

        Args:
            message: Error message
            code: Error code identifier
            stage: Pipeline stage the error surfaced in
            record_id: QA record the error concerns
        """
        super().__init__(message)
        self.code = code
        self.stage = stage
        self.record_id = record_id
        self.context: dict[str, Any] = {}

    def with_context(self, **kwargs: Any) -> Self:
        """Merge details into the error.

        ``stage`` and ``record_id`` set the matching attributes; other keys
        go into ``context``.
        """
        if "stage" in kwargs:
            self.stage = kwargs.pop("stage")
        if "record_id" in kwargs:
            self.record_id = kwargs.pop("record_id")
        self.context.update(kwargs)
        return self

    def located(self) -> str:
        """The message prefixed with the stage and record, when known."""
        where = []
        if self.stage:
            where.append(f"stage {self.stage}")
        if self.record_id:
            where.append(f"record {self.record_id}")
        message = str(self)
        return f"[{', '.join(where)}] {message}" if where else message
