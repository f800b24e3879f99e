"""Error classes for curation."""

from ..errors import FinpotError


class CurationInputError(FinpotError):
    """Curation inputs are inconsistent."""

    def __init__(self, record_id: str, message: str = "has no teacher output") -> None:
        super().__init__(f"Record {record_id!r} {message}", code="CURATION_INPUT_ERROR", record_id=record_id)
