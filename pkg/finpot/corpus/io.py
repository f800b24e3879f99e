"""Record persistence in the run directory."""

from collections.abc import Iterable
from pathlib import Path

from ..storage import iter_jsonl, write_json, write_jsonl
from .errors import IngestError
from .splits import Splits
from .types import QARecord


def write_records(records: Iterable[QARecord], path: Path) -> int:
    """Write records one JSON object per line.

    Returns:
        Number of records written
    """
    return write_jsonl(path, (r.to_dict() for r in records))


def read_records(path: Path) -> list[QARecord]:
    """Read records written by write_records."""
    if not path.exists():
        raise IngestError(path, "file does not exist")
    return [QARecord.from_dict(row) for row in iter_jsonl(path)]


def write_split_manifest(splits: Splits, seed: int, path: Path) -> None:
    """Write the record ids of each split and the seed used."""
    write_json(
        path,
        {
            "seed": seed,
            "train": [r.id for r in splits.train],
            "dev": [r.id for r in splits.dev],
            "test": [r.id for r in splits.test],
        },
    )
