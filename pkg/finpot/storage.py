"""Line-delimited JSON persistence shared by the pipeline stages."""

import hashlib
import json
import os
import tempfile
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any


def dumps(obj: Any) -> str:
    """Serialize an object to a single canonical JSON line."""
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_text_atomic(path: Path, text: str) -> None:
    """Write text to a file through a temporary sibling and rename.

    Args:
        path: Destination file
        text: File contents
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def write_jsonl(path: Path, rows: Iterable[dict[str, Any]]) -> int:
    """Write rows as line-delimited JSON, replacing any previous file.

    Args:
        path: Destination file
        rows: JSON-serializable dictionaries

    Returns:
        Number of rows written
    """
    lines = [dumps(row) for row in rows]
    write_text_atomic(path, "".join(f"{line}\n" for line in lines))
    return len(lines)


def iter_jsonl(path: Path) -> Iterator[dict[str, Any]]:
    """Yield the objects of a line-delimited JSON file, skipping blank lines."""
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)


def read_jsonl(path: Path) -> list[dict[str, Any]]:
    """Read every object of a line-delimited JSON file."""
    return list(iter_jsonl(path))


def write_json(path: Path, obj: Any) -> None:
    """Write a pretty-printed JSON document."""
    write_text_atomic(path, json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def read_json(path: Path) -> Any:
    """Read a JSON document."""
    return json.loads(path.read_text(encoding="utf-8"))


def sha256_text(text: str) -> str:
    """Hex SHA-256 digest of a UTF-8 string."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: Path) -> str:
    """Hex SHA-256 digest of a file's bytes."""
    digest = hashlib.sha256()
    with path.open("rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
