"""Error classes for the corpus module."""

from ..errors import FinpotError


class CorpusError(FinpotError):
    """Base exception for corpus errors."""

    def __init__(self, message: str, code: str = "CORPUS_ERROR") -> None:
        super().__init__(message, code=code)


class IngestError(CorpusError):
    """A raw dataset file could not be read."""

    def __init__(self, path: object, reason: str) -> None:
        super().__init__(f"Cannot ingest {path}: {reason}", code="INGEST_ERROR")
        self.path = path


class SchemaError(CorpusError):
    """A raw sample does not match its adapter's documented schema."""

    def __init__(
        self,
        field: str,
        index: int | None = None,
        path: object = None,
        *,
        record_id: str | None = None,
        reason: str = "is missing required field",
    ) -> None:
        subject = f"Sample {index}" if index is not None else f"Record {record_id!r}"
        where = f" in {path}" if path is not None else ""
        super().__init__(
            f"{subject}{where} {reason} {field!r}",
            code="SCHEMA_ERROR",
            record_id=record_id,
        )
        self.field = field
        self.index = index


class SplitConfigError(CorpusError):
    """A split plan cannot be applied to the given records."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="SPLIT_CONFIG_ERROR")


class SamplingError(CorpusError):
    """A subset cannot be drawn from the given records."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="SAMPLING_ERROR")
