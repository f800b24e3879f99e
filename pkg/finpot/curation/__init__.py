"""Execution-based curation of teacher programs into fine-tuning pairs."""

from ..prompts import CuratedSample
from .curate import audit, curate, curate_with_retries, read_curated, write_curated, write_report
from .errors import CurationInputError
from .types import REJECTION_REASONS, CurationReport, Rejection, RejectionReason

__all__ = [
    "REJECTION_REASONS",
    "CuratedSample",
    "CurationInputError",
    "CurationReport",
    "Rejection",
    "RejectionReason",
    "audit",
    "curate",
    "curate_with_retries",
    "read_curated",
    "write_curated",
    "write_report",
]
