"""Error classes for program structure parsing."""

from ..errors import FinpotError


class StructureError(FinpotError):
    """A program lacks a required structural segment."""

    def __init__(self, message: str) -> None:
        super().__init__(message, code="STRUCTURE_ERROR")
